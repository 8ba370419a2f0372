//! Line bundle cohomology on smooth complete toric varieties.
//!
//! `h^i(O(D)) = Σ_m dim H̃^{i−1}(Δ_{D,m})` where, for a weight `m`, the
//! complex `Δ_{D,m}` consists of the cones of the fan all of whose rays
//! satisfy `⟨m, v_ρ⟩ < −a_ρ`. Only weights inside the bounding box of the
//! hyperplane arrangement `{⟨m, v_ρ⟩ = −a_ρ}` can contribute.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::divisor::{dot, for_each_point, Arrangement, PicClass, PicardLattice, TDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::lattice::IntMatrix;

/// A set of ray indices, stored as a bitmask (at most 128 rays).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern(pub u128);

impl SupportPattern {
    pub fn from_indices(indices: &[usize]) -> Self {
        SupportPattern(indices.iter().fold(0u128, |m, &i| m | 1 << i))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    fn contains_all(&self, mask: u128) -> bool {
        self.0 & mask == mask
    }
}

/// Dimensions `h^0, …, h^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyTable(pub Vec<u64>);

impl CohomologyTable {
    pub fn dims(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `(1, 0, …, 0)`.
    pub fn is_unit(&self) -> bool {
        self.0.first() == Some(&1) && self.0[1..].iter().all(|&x| x == 0)
    }

    pub fn higher_vanish(&self) -> bool {
        self.0.iter().skip(1).all(|&x| x == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &h)| if i % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }
}

/// Cones of a fan grouped by dimension, as ray bitmasks in sorted order.
#[derive(Clone, Debug)]
struct FaceLattice {
    by_dim: Vec<Vec<u128>>,
}

impl FaceLattice {
    fn new(fan: &Fan) -> Result<Self, Error> {
        if fan.num_rays() > 128 {
            return Err(Error::TooManyRays(fan.num_rays()));
        }
        let mut by_dim = vec![Vec::new(); fan.rank() + 1];
        for cone in fan.all_cones() {
            by_dim[cone.len()].push(SupportPattern::from_indices(&cone).0);
        }
        for v in by_dim.iter_mut() {
            v.sort_unstable();
        }
        Ok(FaceLattice { by_dim })
    }

    /// Dimensions of `H̃^{-1}, …, H̃^{n−1}` of the subcomplex on `pattern`.
    fn reduced_cohomology(&self, pattern: SupportPattern) -> Vec<u64> {
        let n = self.by_dim.len() - 1;
        // faces[k] = simplices with k vertices (k = 0 is the empty simplex)
        let faces: Vec<Vec<u128>> =
            self.by_dim.iter().map(|v| v.iter().copied().filter(|&f| pattern.contains_all(f)).collect()).collect();
        // ranks[k] = rank of the coboundary from k-vertex faces to (k+1)-vertex faces
        let mut ranks = vec![0usize; n + 1];
        for k in 0..n {
            if faces[k].is_empty() || faces[k + 1].is_empty() {
                continue;
            }
            ranks[k] = coboundary(&faces[k], &faces[k + 1]).rank();
        }
        (0..=n)
            .map(|k| {
                let below = if k == 0 { 0 } else { ranks[k - 1] };
                (faces[k].len() - ranks[k] - below) as u64
            })
            .collect()
    }
}

/// Coboundary matrix with rows indexed by `upper` and columns by `lower`.
fn coboundary(lower: &[u128], upper: &[u128]) -> IntMatrix {
    let mut m = IntMatrix::zeros(upper.len(), lower.len());
    for (r, &face) in upper.iter().enumerate() {
        let mut position = 0;
        let mut bits = face;
        while bits != 0 {
            let i = bits.trailing_zeros();
            let facet = face & !(1u128 << i);
            if let Ok(c) = lower.binary_search(&facet) {
                m[(r, c)] = if position % 2 == 0 { 1.into() } else { (-1).into() };
            }
            position += 1;
            bits &= bits - 1;
        }
    }
    m
}

/// Reduced rational cohomology `H̃^{-1}, …, H̃^{n−1}` of the subcomplex of
/// the fan's cones whose rays all lie in `pattern`.
pub fn reduced_cohomology(fan: &Fan, pattern: SupportPattern) -> Result<Vec<u64>, Error> {
    Ok(FaceLattice::new(fan)?.reduced_cohomology(pattern))
}

/// Cohomology calculator for one fan.
///
/// Memoizes reduced cohomology per support pattern and full tables per
/// Picard class. Mutation is confined to `&mut self`; use one engine per
/// thread for parallel work.
#[derive(Clone, Debug)]
pub struct CohomologyEngine {
    fan: Fan,
    lattice: PicardLattice,
    faces: FaceLattice,
    arrangement: Arrangement,
    patterns: BTreeMap<u128, Vec<u64>>,
    tables: BTreeMap<PicClass, CohomologyTable>,
}

impl CohomologyEngine {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        if !fan.is_complete() {
            return Err(Error::NotComplete);
        }
        Ok(CohomologyEngine {
            fan: fan.clone(),
            lattice: PicardLattice::new(fan)?,
            faces: FaceLattice::new(fan)?,
            arrangement: Arrangement::new(fan)?,
            patterns: BTreeMap::new(),
            tables: BTreeMap::new(),
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    fn pattern_dims(&mut self, mask: u128) -> &[u64] {
        let faces = &self.faces;
        self.patterns.entry(mask).or_insert_with(|| faces.reduced_cohomology(SupportPattern(mask)))
    }

    /// `h^i(X, O(D))` for `i = 0..=n`.
    pub fn line_bundle(&mut self, d: &TDivisor) -> Result<CohomologyTable, Error> {
        let class = self.lattice.class_of(d)?;
        if let Some(t) = self.tables.get(&class) {
            return Ok(t.clone());
        }
        let table = self.compute(d);
        self.tables.insert(class, table.clone());
        Ok(table)
    }

    pub fn of_class(&mut self, c: &PicClass) -> Result<CohomologyTable, Error> {
        if let Some(t) = self.tables.get(c) {
            return Ok(t.clone());
        }
        let d = self.lattice.divisor_of(c);
        self.line_bundle(&d)
    }

    /// `Ext^i(O(D1), O(D2)) = H^i(O(D2 − D1))`.
    pub fn ext(&mut self, d1: &TDivisor, d2: &TDivisor) -> Result<CohomologyTable, Error> {
        self.line_bundle(&(d2 - d1))
    }

    pub fn ext_classes(&mut self, c1: &PicClass, c2: &PicClass) -> Result<CohomologyTable, Error> {
        self.of_class(&(c2 - c1))
    }

    pub fn euler_char(&mut self, d: &TDivisor) -> Result<i64, Error> {
        Ok(self.line_bundle(d)?.euler_characteristic())
    }

    fn pattern_of(&self, d: &TDivisor, m: &[i64]) -> u128 {
        let mut mask = 0u128;
        for (i, (v, &a)) in self.fan.rays().iter().zip(d.coeffs()).enumerate() {
            if dot(v, m) < -a {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn compute(&mut self, d: &TDivisor) -> CohomologyTable {
        let n = self.fan.rank();
        let (mut lo, mut hi) = self.arrangement.bounding_box(d);
        for k in 0..n {
            lo[k] -= 1;
            hi[k] += 1;
        }
        #[cfg(debug_assertions)]
        self.check_far_weights_acyclic(d, &lo, &hi);

        let rays = self.fan.rays().to_vec();
        let coeffs = d.coeffs().to_vec();
        let mut h = vec![0u64; n + 1];
        // Tally patterns first so each distinct pattern is resolved once.
        let mut counts: BTreeMap<u128, u64> = BTreeMap::new();
        let mut values = vec![0i64; rays.len()];
        for_each_point(&lo, &hi, |m| {
            let mut mask = 0u128;
            for (i, v) in rays.iter().enumerate() {
                values[i] = dot(v, m);
                if values[i] < -coeffs[i] {
                    mask |= 1 << i;
                }
            }
            *counts.entry(mask).or_default() += 1;
        });
        for (mask, count) in counts {
            let dims = self.pattern_dims(mask);
            for (hk, &dk) in h.iter_mut().zip(dims) {
                *hk += dk * count;
            }
        }
        CohomologyTable(h)
    }

    /// Weights just outside the search box lie in unbounded chambers of the
    /// arrangement, whose patterns must be acyclic.
    #[cfg(debug_assertions)]
    fn check_far_weights_acyclic(&mut self, d: &TDivisor, lo: &[i64], hi: &[i64]) {
        let n = lo.len();
        let mid: Vec<i64> = lo.iter().zip(hi).map(|(a, b)| (a + b) / 2).collect();
        let mut samples = Vec::new();
        for k in 0..n {
            for edge in [lo[k] - 1, hi[k] + 1] {
                let mut p = mid.clone();
                p[k] = edge;
                samples.push(p.clone());
                let mut q = lo.iter().map(|x| x - 1).collect::<Vec<_>>();
                q[k] = edge;
                samples.push(q);
            }
        }
        for m in samples {
            let mask = self.pattern_of(d, &m);
            let dims = self.pattern_dims(mask);
            debug_assert!(dims.iter().all(|&x| x == 0), "weight {m:?} outside the box has a non-acyclic pattern");
        }
    }
}

/// One-shot convenience wrapper around [`CohomologyEngine::line_bundle`].
pub fn line_bundle_cohomology(fan: &Fan, d: &TDivisor) -> Result<CohomologyTable, Error> {
    CohomologyEngine::new(fan)?.line_bundle(d)
}

pub fn ext_table(fan: &Fan, d1: &TDivisor, d2: &TDivisor) -> Result<CohomologyTable, Error> {
    CohomologyEngine::new(fan)?.ext(d1, d2)
}

pub fn euler_char(fan: &Fan, d: &TDivisor) -> Result<i64, Error> {
    CohomologyEngine::new(fan)?.euler_char(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn reduced_cohomology_examples() {
        let p2 = catalog::projective_space(2);
        assert_eq!(reduced_cohomology(&p2, SupportPattern(0)).unwrap(), vec![1, 0, 0]);
        assert_eq!(reduced_cohomology(&p2, SupportPattern::from_indices(&[1])).unwrap(), vec![0, 0, 0]);
        assert_eq!(reduced_cohomology(&p2, SupportPattern::from_indices(&[0, 1, 2])).unwrap(), vec![0, 0, 1]);
        // two rays of P^2 span a cone: an edge, contractible
        assert_eq!(reduced_cohomology(&p2, SupportPattern::from_indices(&[0, 2])).unwrap(), vec![0, 0, 0]);
        // two opposite rays of P^1 x P^1: two points, H̃^0 = 1
        let p1p1 = catalog::p1xp1();
        let (a, b) = (p1p1.ray_index(&[1, 0]).unwrap(), p1p1.ray_index(&[-1, 0]).unwrap());
        assert_eq!(reduced_cohomology(&p1p1, SupportPattern::from_indices(&[a, b])).unwrap(), vec![0, 1, 0]);
        let p3 = catalog::projective_space(3);
        assert_eq!(reduced_cohomology(&p3, SupportPattern::from_indices(&[0, 1, 2, 3])).unwrap(), vec![0, 0, 0, 1]);
    }

    #[test]
    fn line_bundle_examples() {
        let p2 = catalog::projective_space(2);
        let mut eng = CohomologyEngine::new(&p2).unwrap();
        let h = TDivisor::prime(3, 0);
        assert_eq!(eng.line_bundle(&h).unwrap().0, vec![3, 0, 0]);
        assert_eq!(eng.line_bundle(&TDivisor::new(vec![-1, -1, -1])).unwrap().0, vec![0, 0, 1]);
        assert_eq!(eng.euler_char(&TDivisor::zero(3)).unwrap(), 1);
        assert_eq!(eng.euler_char(&h.scale(-1)).unwrap(), 0);
        assert!(eng.line_bundle(&h.scale(-1)).unwrap().is_zero());
        assert_eq!(eng.ext(&TDivisor::zero(3), &h).unwrap().0, vec![3, 0, 0]);

        let p1p1 = catalog::p1xp1();
        let a = p1p1.ray_index(&[1, 0]).unwrap();
        assert!(line_bundle_cohomology(&p1p1, &TDivisor::prime(4, a).scale(-1)).unwrap().is_zero());

        let p1 = catalog::projective_space(1);
        assert!(ext_table(&p1, &TDivisor::prime(2, 0), &TDivisor::zero(2)).unwrap().is_zero());
        let p3 = catalog::projective_space(3);
        assert_eq!(euler_char(&p3, &TDivisor::new(vec![1; 4])).unwrap(), 35);
    }

    #[test]
    fn structure_sheaf_is_acyclic() {
        for fan in [catalog::hirzebruch(2), catalog::dp6(), catalog::projective_space(3)] {
            let t = line_bundle_cohomology(&fan, &TDivisor::zero(fan.num_rays())).unwrap();
            assert!(t.is_unit());
        }
    }

    #[test]
    fn rejects_singular_fans() {
        let sing = Fan::new(2, vec![vec![1, 0], vec![1, 2], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(CohomologyEngine::new(&sing).unwrap_err(), Error::NotSmooth);
    }
}
