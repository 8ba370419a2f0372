//! Simplicial fans with full-dimensional maximal cones.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::divisor::TDivisor;
use crate::error::Error;
use crate::lattice::{gcd_all, rational_feasible, IntMatrix, LinearConstraint};

/// A fan given by primitive ray generators and maximal cones (ray-index sets).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// A ridge between two adjacent maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub ridge: Vec<usize>,
    pub left: usize,
    pub right: usize,
    /// The ray completing the ridge to the left cone.
    pub left_ray: usize,
    pub right_ray: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanDefect {
    WrongRayLength(usize),
    ZeroRay(usize),
    NonPrimitiveRay(usize),
    DuplicateRay(usize, usize),
    RayIndexOutOfRange(usize),
    WrongConeSize(usize),
    RepeatedRayInCone(usize),
    DependentCone(usize),
    DuplicateCone(usize, usize),
    UnusedRay(usize),
    ImproperIntersection(usize, usize),
}

impl fmt::Display for FanDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FanDefect::WrongRayLength(i) => write!(f, "ray {i} has the wrong number of coordinates"),
            FanDefect::ZeroRay(i) => write!(f, "ray {i} is zero"),
            FanDefect::NonPrimitiveRay(i) => write!(f, "ray {i} is not primitive"),
            FanDefect::DuplicateRay(i, j) => write!(f, "rays {i} and {j} coincide"),
            FanDefect::RayIndexOutOfRange(c) => write!(f, "cone {c} references a missing ray"),
            FanDefect::WrongConeSize(c) => write!(f, "cone {c} does not have rank-many rays"),
            FanDefect::RepeatedRayInCone(c) => write!(f, "cone {c} repeats a ray"),
            FanDefect::DependentCone(c) => write!(f, "cone {c} has linearly dependent rays"),
            FanDefect::DuplicateCone(a, b) => write!(f, "cones {a} and {b} coincide"),
            FanDefect::UnusedRay(i) => write!(f, "ray {i} lies in no maximal cone"),
            FanDefect::ImproperIntersection(a, b) => {
                write!(f, "cones {a} and {b} do not meet in a common face")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<FanDefect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Fan {
    /// Builds a fan without checking anything; see [`Fan::validate`].
    /// Each cone's index list is sorted.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Self {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan { rank, rays, max_cones }
    }

    /// Builds a fan and rejects it if validation reports any defect.
    pub fn checked(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, Error> {
        let fan = Fan::new(rank, rays, max_cones);
        let report = fan.validate();
        match report.failures.first() {
            None => Ok(fan),
            Some(d) => Err(Error::InvalidFan(format!("{d}"))),
        }
    }

    /// The fan of a point: rank 0, one empty maximal cone.
    pub fn point() -> Self {
        Fan { rank: 0, rays: Vec::new(), max_cones: vec![Vec::new()] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_max_cones(&self) -> usize {
        self.max_cones.len()
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    /// Square matrix whose columns are the generators of maximal cone `c`.
    pub fn cone_matrix(&self, c: usize) -> IntMatrix {
        let cols: Vec<&[i64]> = self.max_cones[c].iter().map(|&i| self.rays[i].as_slice()).collect();
        IntMatrix::from_columns(self.rank, &cols)
    }

    /// Is `cone` (a set of ray indices) a face of some maximal cone?
    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        self.max_cones.iter().any(|m| cone.iter().all(|i| m.contains(i)))
    }

    /// Every cone of the fan (including the zero cone), each as a sorted ray-index list.
    pub fn all_cones(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for cone in &self.max_cones {
            for mask in 0u32..(1u32 << cone.len()) {
                let face: Vec<usize> =
                    cone.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                out.insert(face);
            }
        }
        out
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let n = self.rank;
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != n {
                failures.push(FanDefect::WrongRayLength(i));
            } else if r.iter().all(|&x| x == 0) {
                failures.push(FanDefect::ZeroRay(i));
            } else if gcd_all(r) != 1 {
                failures.push(FanDefect::NonPrimitiveRay(i));
            }
        }
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    failures.push(FanDefect::DuplicateRay(i, j));
                }
            }
        }
        if !failures.is_empty() {
            return ValidationReport { failures };
        }
        let mut good_cones = Vec::new();
        let mut used = vec![false; self.rays.len()];
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.iter().any(|&i| i >= self.rays.len()) {
                failures.push(FanDefect::RayIndexOutOfRange(c));
                continue;
            }
            if cone.windows(2).any(|w| w[0] == w[1]) {
                failures.push(FanDefect::RepeatedRayInCone(c));
                continue;
            }
            for &i in cone {
                used[i] = true;
            }
            if cone.len() != n {
                failures.push(FanDefect::WrongConeSize(c));
                continue;
            }
            if self.cone_matrix(c).det().is_zero() {
                failures.push(FanDefect::DependentCone(c));
                continue;
            }
            good_cones.push(c);
        }
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                if self.max_cones[a] == self.max_cones[b] {
                    failures.push(FanDefect::DuplicateCone(a, b));
                }
            }
        }
        for (i, u) in used.iter().enumerate() {
            if !u {
                failures.push(FanDefect::UnusedRay(i));
            }
        }
        for (k, &a) in good_cones.iter().enumerate() {
            for &b in &good_cones[k + 1..] {
                if self.max_cones[a] != self.max_cones[b] && !self.meet_properly(a, b) {
                    failures.push(FanDefect::ImproperIntersection(a, b));
                }
            }
        }
        ValidationReport { failures }
    }

    /// Do maximal cones `a` and `b` intersect in their common face?
    ///
    /// Writes a point of cone(b) as `μ ≥ 0` in b's generators, expresses it in
    /// a's generators as `λ = V_a⁻¹ V_b μ`, and asks for a nonnegative solution
    /// with positive weight on the generators not shared by both cones.
    fn meet_properly(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (&self.max_cones[a], &self.max_cones[b]);
        let n = self.rank;
        let va = self.cone_matrix(a);
        let cols: Vec<Vec<BigRational>> = cb
            .iter()
            .map(|&j| {
                let v: Vec<BigInt> = self.rays[j].iter().map(|&x| x.into()).collect();
                crate::lattice::solve_rational(&va, &v).expect("independent cone")
            })
            .collect();
        let r = |x: i64| BigRational::from_integer(x.into());
        let mut sys = Vec::new();
        for k in 0..n {
            let mut e = vec![r(0); n];
            e[k] = r(1);
            sys.push(LinearConstraint::new(e, r(0), false));
            let row: Vec<BigRational> = cols.iter().map(|c| c[k].clone()).collect();
            sys.push(LinearConstraint::new(row, r(0), false));
        }
        let mut weight = vec![r(0); n];
        for (k, &ray) in ca.iter().enumerate() {
            if !cb.contains(&ray) {
                for (j, c) in cols.iter().enumerate() {
                    weight[j] += &c[k];
                }
            }
        }
        for (j, &ray) in cb.iter().enumerate() {
            if !ca.contains(&ray) {
                weight[j] += BigRational::one();
            }
        }
        sys.push(LinearConstraint::new(weight, r(0), true));
        matches!(rational_feasible(&sys), Ok(None))
    }

    pub fn is_smooth(&self) -> bool {
        (0..self.max_cones.len()).all(|c| self.cone_matrix(c).det().abs().is_one())
    }

    /// Ridges mapped to the maximal cones containing them.
    fn ridge_map(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            for (k, &apex) in cone.iter().enumerate() {
                let mut ridge = cone.clone();
                ridge.remove(k);
                map.entry(ridge).or_default().push((c, apex));
            }
        }
        map
    }

    /// Every ridge lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        self.ridge_map().values().all(|v| v.len() == 2)
    }

    /// All walls, each ridge listed once, in ridge order.
    pub fn walls(&self) -> Result<Vec<Wall>, Error> {
        self.ridge_map()
            .into_iter()
            .map(|(ridge, adj)| match adj.as_slice() {
                [(l, lr), (r, rr)] => Ok(Wall { ridge, left: *l, right: *r, left_ray: *lr, right_ray: *rr }),
                _ => Err(Error::NotComplete),
            })
            .collect()
    }

    /// Sorts rays lexicographically and cones by their index lists.
    /// Returns the fan and the map from old to new ray indices.
    pub fn canonicalize(self) -> (Fan, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut old_to_new = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let mut cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut c: Vec<usize> = c.iter().map(|&i| old_to_new[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        (Fan { rank: self.rank, rays, max_cones: cones }, old_to_new)
    }

    /// Product fan, with the index of each factor ray inside the product.
    pub fn product_with_embeddings(&self, other: &Fan) -> (Fan, Vec<usize>, Vec<usize>) {
        let n = self.rank + other.rank;
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.rank];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let off = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|&j| j + off));
                cones.push(c);
            }
        }
        let (fan, map) = Fan::new(n, rays, cones).canonicalize();
        let left = map[..off].to_vec();
        let right = map[off..].to_vec();
        (fan, left, right)
    }

    pub fn product(&self, other: &Fan) -> Fan {
        self.product_with_embeddings(other).0
    }

    /// Star subdivision of a smooth fan at `cone` (the toric blowup along
    /// the orbit closure of that cone).
    pub fn star_subdivision(&self, cone: &[usize]) -> Result<Fan, Error> {
        let mut cone = cone.to_vec();
        cone.sort_unstable();
        cone.dedup();
        if cone.len() < 2 {
            return Err(Error::ConeTooSmall);
        }
        if cone.iter().any(|&i| i >= self.rays.len()) || !self.contains_cone(&cone) {
            return Err(Error::NotACone);
        }
        let mut new_ray = vec![0i64; self.rank];
        for &i in &cone {
            for (x, y) in new_ray.iter_mut().zip(&self.rays[i]) {
                *x += y;
            }
        }
        if gcd_all(&new_ray) != 1 {
            return Err(Error::NotSmooth);
        }
        let idx = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(new_ray);
        let mut cones = Vec::new();
        for m in &self.max_cones {
            if cone.iter().all(|i| m.contains(i)) {
                for &drop in &cone {
                    let mut c: Vec<usize> = m.iter().copied().filter(|&i| i != drop).collect();
                    c.push(idx);
                    cones.push(c);
                }
            } else {
                cones.push(m.clone());
            }
        }
        Ok(Fan::new(self.rank, rays, cones).canonicalize().0)
    }

    /// Fan of the projectivized bundle `P(O ⊕ O(D_1) ⊕ … ⊕ O(D_r))` over this fan.
    ///
    /// Base ray `v_ρ` lifts to `(v_ρ, a¹_ρ, …, aʳ_ρ)` where `aⁱ_ρ` is the
    /// coefficient of `D_i` at ρ; the fiber rays are `e_1, …, e_r` and
    /// `−(e_1 + … + e_r)`. Over P¹ with `D = a·D_{(−1)}` this yields the
    /// Hirzebruch fan with `u_1 = −e_1 + a·e_2`.
    pub fn projectivize(&self, twists: &[TDivisor]) -> Result<Fan, Error> {
        if !self.is_smooth() {
            return Err(Error::NotSmooth);
        }
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        for t in twists {
            if t.len() != self.rays.len() {
                return Err(Error::LengthMismatch { expected: self.rays.len(), found: t.len() });
            }
        }
        let r = twists.len();
        let n = self.rank + r;
        let mut rays = Vec::new();
        for (i, v) in self.rays.iter().enumerate() {
            let mut w = v.clone();
            w.extend(twists.iter().map(|t| t.coeffs()[i]));
            rays.push(w);
        }
        let base = self.rays.len();
        for k in 0..r {
            let mut w = vec![0; n];
            w[self.rank + k] = 1;
            rays.push(w);
        }
        let mut w = vec![0; self.rank];
        w.extend(core::iter::repeat_n(-1, r));
        rays.push(w);
        let mut cones = Vec::new();
        for c in &self.max_cones {
            for omit in 0..=r {
                let mut cone = c.clone();
                cone.extend((0..=r).filter(|&k| k != omit).map(|k| base + k));
                cones.push(cone);
            }
        }
        Ok(Fan::new(n, rays, cones).canonicalize().0)
    }
}
