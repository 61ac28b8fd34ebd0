use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lring::BiPoly;

use super::linalg::{dot, gcd_all, normal_in_span, rank, Vector};

/// A cone as a sorted set of ray indices.
pub type Cone = Vec<usize>;

/// Face data of one cone: its dimension and the ray sets of its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeShape {
    pub dim: usize,
    pub facets: Vec<Cone>,
    /// Inward normals of the facets, in the span of the cone.
    pub normals: Vec<Vector>,
}

/// A validated fan: primitive rays, cones closed under faces (including the
/// zero cone), every cone strongly convex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vector>,
    cones: Vec<Cone>,
    shapes: BTreeMap<Cone, ConeShape>,
    maximal: Vec<Cone>,
    complete: bool,
    warnings: Vec<String>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFan(msg.into())
}

fn fmt_cone(c: &[usize]) -> String {
    format!("{c:?}")
}

/// Facets of the cone spanned by `rays` (indices into `all`), as ray index
/// sets. Fails if the cone contains a line or a generator is not extremal.
fn shape(all: &[Vector], cone: &[usize]) -> Result<ConeShape> {
    let vecs: Vec<Vector> = cone.iter().map(|&i| all[i].clone()).collect();
    let d = rank(&vecs);
    if cone.is_empty() {
        return Ok(ConeShape { dim: 0, facets: Vec::new(), normals: Vec::new() });
    }
    if d == 1 {
        if cone.len() > 1 {
            return Err(invalid(format!(
                "cone {} contains a line or repeats a direction",
                fmt_cone(cone)
            )));
        }
        return Ok(ConeShape { dim: 1, facets: vec![Vec::new()], normals: vec![all[cone[0]].clone()] });
    }
    // a basis of the span drawn from the generators
    let mut basis: Vec<Vector> = Vec::new();
    for v in &vecs {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    let mut facets: BTreeMap<Cone, Vector> = BTreeMap::new();
    for subset in combinations(cone.len(), d - 1) {
        let face: Vec<&Vector> = subset.iter().map(|&i| &vecs[i]).collect();
        if rank(&face.iter().map(|v| (*v).clone()).collect::<Vec<_>>()) != d - 1 {
            continue;
        }
        let n = normal_in_span(&basis, &face);
        let vals: Vec<i64> = vecs.iter().map(|v| dot(&n, v)).collect();
        let n = if vals.iter().all(|&x| x >= 0) {
            n
        } else if vals.iter().all(|&x| x <= 0) {
            n.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let on: Cone = cone
            .iter()
            .zip(&vecs)
            .filter(|(_, v)| dot(&n, v) == 0)
            .map(|(&i, _)| i)
            .collect();
        facets.entry(on).or_insert(n);
    }
    let pointed = !facets.is_empty()
        && vecs.iter().all(|v| facets.values().map(|n| dot(n, v)).sum::<i64>() > 0);
    if !pointed {
        return Err(invalid(format!("cone {} is not strongly convex", fmt_cone(cone))));
    }
    let (facets, normals) = facets.into_iter().unzip();
    Ok(ConeShape { dim: d, facets, normals })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Faces of a cone: intersections of facets, including the cone itself.
fn faces(cone: &[usize], shapes: &ConeShape) -> BTreeSet<Cone> {
    let mut out = BTreeSet::new();
    let mut queue = vec![cone.to_vec()];
    out.insert(cone.to_vec());
    while let Some(g) = queue.pop() {
        for f in &shapes.facets {
            let h: Cone = g.iter().copied().filter(|i| f.contains(i)).collect();
            if out.insert(h.clone()) {
                queue.push(h);
            }
        }
    }
    out
}

impl Fan {
    /// Validates fan data. Non-primitive rays are divided by their gcd with
    /// a warning; face closure is completed.
    pub fn new(rank_n: usize, rays: Vec<Vector>, cones: Vec<Vec<usize>>, complete: bool) -> Result<Self> {
        if rank_n == 0 {
            return Err(invalid("rank must be positive"));
        }
        let mut warnings = Vec::new();
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.into_iter().enumerate() {
            if r.len() != rank_n {
                return Err(invalid(format!("ray {i} has {} entries, expected {rank_n}", r.len())));
            }
            let g = gcd_all(&r);
            if g == 0 {
                return Err(invalid(format!("ray {i} is zero")));
            }
            if g != 1 {
                let p: Vector = r.iter().map(|x| x / g).collect();
                warnings.push(format!("ray {i} {r:?} is not primitive; using {p:?}"));
                prim.push(p);
            } else {
                prim.push(r);
            }
        }
        for i in 0..prim.len() {
            if let Some(j) = (i + 1..prim.len()).find(|&j| prim[j] == prim[i]) {
                return Err(invalid(format!("rays {i} and {j} coincide")));
            }
        }
        let mut shapes: BTreeMap<Cone, ConeShape> = BTreeMap::new();
        let mut given: Vec<Cone> = Vec::new();
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= prim.len()) {
                return Err(invalid(format!("cone {} refers to missing ray {bad}", fmt_cone(&c))));
            }
            let s = shape(&prim, &c)?;
            for f in faces(&c, &s) {
                if !shapes.contains_key(&f) {
                    let fs = shape(&prim, &f)?;
                    shapes.insert(f, fs);
                }
            }
            shapes.insert(c.clone(), s);
            given.push(c);
        }
        shapes.entry(Vec::new()).or_insert_with(|| ConeShape { dim: 0, facets: Vec::new(), normals: Vec::new() });
        for i in 0..prim.len() {
            if !shapes.contains_key(&vec![i]) {
                shapes.insert(vec![i], shape(&prim, &[i])?);
            }
        }
        // every generator of every cone must itself be a face
        for c in shapes.keys() {
            for &i in c {
                if !faces(c, &shapes[c]).contains(&vec![i]) {
                    return Err(invalid(format!(
                        "ray {i} is not an extremal ray of cone {}",
                        fmt_cone(c)
                    )));
                }
            }
        }
        let mut cones: Vec<Cone> = shapes.keys().cloned().collect();
        cones.sort_by(|a, b| shapes[a].dim.cmp(&shapes[b].dim).then_with(|| a.cmp(b)));
        let maximal: Vec<Cone> = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
            .cloned()
            .collect();
        let fan = Self {
            rank: rank_n,
            rays: prim,
            cones,
            shapes,
            maximal,
            complete,
            warnings,
        };
        if complete {
            fan.check_completeness()?;
        }
        Ok(fan)
    }

    /// Heuristic for user-asserted completeness: all maximal cones are
    /// full-dimensional, every codimension-one cone lies on exactly two of
    /// them, and the Euler relation `Σ (-1)^k d_k = (-1)^rank` holds.
    fn check_completeness(&self) -> Result<()> {
        let n = self.rank;
        if let Some(c) = self.maximal.iter().find(|c| self.shapes[*c].dim != n) {
            return Err(invalid(format!(
                "declared complete but maximal cone {} is not full-dimensional",
                fmt_cone(c)
            )));
        }
        for c in self.cones.iter().filter(|c| self.shapes[*c].dim + 1 == n) {
            let k = self
                .maximal
                .iter()
                .filter(|m| c.iter().all(|i| m.contains(i)))
                .count();
            if k != 2 {
                return Err(invalid(format!(
                    "declared complete but wall {} bounds {k} maximal cones",
                    fmt_cone(c)
                )));
            }
        }
        let euler: i64 = self
            .cone_counts()
            .iter()
            .enumerate()
            .map(|(k, d)| if k % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum();
        if euler != if n % 2 == 0 { 1 } else { -1 } {
            return Err(invalid("declared complete but the Euler relation fails"));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &Vector {
        &self.rays[i]
    }

    /// All cones, ordered by dimension then ray indices; the zero cone first.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    pub fn shape(&self, c: &[usize]) -> Option<&ConeShape> {
        self.shapes.get(c)
    }

    pub fn cone_dim(&self, c: &[usize]) -> usize {
        self.shapes.get(c).map_or_else(|| rank(&self.vectors(c)), |s| s.dim)
    }

    pub fn vectors(&self, c: &[usize]) -> Vec<Vector> {
        c.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_simplicial(&self, c: &[usize]) -> bool {
        self.cone_dim(c) == c.len()
    }

    /// Every cone is generated by part of a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|c| {
            self.is_simplicial(c)
                && super::linalg::smith(&self.vectors(c))
                    .map(|s| s.factors.iter().all(|&d| d == 1))
                    .unwrap_or(false)
        })
    }

    /// `d_k` = number of cones of dimension `k`, for `k = 0..=rank`.
    pub fn cone_counts(&self) -> Vec<usize> {
        let mut d = vec![0; self.rank + 1];
        for c in &self.cones {
            d[self.shapes[c].dim] += 1;
        }
        d
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `h_{p,q}` from the cone counts: zero off the diagonal, otherwise
/// `Σ_k d_{m-k} (-1)^{k-p} C(k, k-p)`.
pub fn toric_hodge(fan: &Fan, p: i64, q: i64) -> BigInt {
    let m = fan.rank() as i64;
    if p != q || p < 0 || p > m {
        return BigInt::from(0);
    }
    let d = fan.cone_counts();
    (0..=m)
        .map(|k| {
            let sign = if (k - p).rem_euclid(2) == 0 { 1 } else { -1 };
            BigInt::from(d[(m - k) as usize]) * sign * binom(k, k - p)
        })
        .sum()
}

/// `E = Σ_k d_{m-k} (uv - 1)^k`.
pub fn toric_epoly(fan: &Fan) -> BiPoly {
    let m = fan.rank();
    let d = fan.cone_counts();
    let uv_1 = BiPoly::binomial((1, 1));
    (0..=m).fold(BiPoly::zero(), |acc, k| {
        &acc + &uv_1.pow(k as u32).scale(&BigInt::from(d[m - k]))
    })
}
