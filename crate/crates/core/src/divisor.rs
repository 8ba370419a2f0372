//! Torus-invariant divisors, the Picard lattice, and intersections with
//! torus-invariant curves.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::fan::{Fan, Wall};
use crate::lattice::{smith_normal_form, solve_rational, IntMatrix, SmithDecomposition};

/// A torus-invariant divisor `Σ a_ρ D_ρ`, indexed by the fan's ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TDivisor(Vec<i64>);

impl TDivisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        TDivisor(coeffs)
    }

    pub fn zero(num_rays: usize) -> Self {
        TDivisor(vec![0; num_rays])
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(num_rays: usize, ray: usize) -> Self {
        let mut c = vec![0; num_rays];
        c[ray] = 1;
        TDivisor(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, k: i64) -> TDivisor {
        TDivisor(self.0.iter().map(|&x| x * k).collect())
    }

    /// Pushes coefficients along a ray permutation: the result has `a_ρ` at `perm[ρ]`.
    pub fn permuted(&self, perm: &[usize]) -> TDivisor {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[perm[i]] = x;
        }
        TDivisor(out)
    }

    /// The principal divisor `div(χ^m) = Σ ⟨m, v_ρ⟩ D_ρ`.
    pub fn principal(fan: &Fan, m: &[i64]) -> TDivisor {
        TDivisor(fan.rays().iter().map(|v| dot(v, m)).collect())
    }
}

impl Add for &TDivisor {
    type Output = TDivisor;
    fn add(self, rhs: &TDivisor) -> TDivisor {
        assert_eq!(self.0.len(), rhs.0.len());
        TDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TDivisor {
    type Output = TDivisor;
    fn sub(self, rhs: &TDivisor) -> TDivisor {
        assert_eq!(self.0.len(), rhs.0.len());
        TDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TDivisor {
    type Output = TDivisor;
    fn neg(self) -> TDivisor {
        TDivisor(self.0.iter().map(|a| -a).collect())
    }
}

/// A divisor class in canonical Picard coordinates.
///
/// The derived ordering (lexicographic on coordinates) is the canonical
/// ordering used for reproducible output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass(Vec<i64>);

impl PicClass {
    pub fn new(coords: Vec<i64>) -> Self {
        PicClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        PicClass(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl Add for &PicClass {
    type Output = PicClass;
    fn add(self, rhs: &PicClass) -> PicClass {
        PicClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &PicClass {
    type Output = PicClass;
    fn sub(self, rhs: &PicClass) -> PicClass {
        PicClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        PicClass(self.0.iter().map(|a| -a).collect())
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The presentation `0 → M → Div_T → Pic → 0`.
///
/// With `A` the `m × n` matrix of ray generators (the map `M → Div_T`) and
/// `L·A·R = S` its Smith form, the last `m − n` coordinates of `L·D` are the
/// canonical Picard coordinates of `D`.
#[derive(Clone, Debug)]
pub struct PicardLattice {
    num_rays: usize,
    fan_rank: usize,
    snf: SmithDecomposition,
    /// `ρ × m`: rows of `L` below the image.
    to_class: Vec<Vec<i64>>,
    /// `ρ` divisors, each a lift of a basis class.
    lifts: Vec<TDivisor>,
}

impl PicardLattice {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        let m = fan.num_rays();
        let n = fan.rank();
        let a = IntMatrix::from_rows(n, fan.rays());
        let snf = smith_normal_form(&a);
        let factors = snf.invariant_factors();
        if factors.len() != n || factors.iter().any(|f| f != &BigInt::from(1)) {
            return Err(Error::Torsion);
        }
        let left = snf.left.to_i64_rows()?;
        let to_class = left[n..].to_vec();
        let u = snf.u.to_i64_rows()?;
        let lifts = (n..m).map(|j| TDivisor((0..m).map(|i| u[i][j]).collect())).collect();
        Ok(PicardLattice { num_rays: m, fan_rank: n, snf, to_class, lifts })
    }

    /// Picard rank `m − n`.
    pub fn rank(&self) -> usize {
        self.num_rays - self.fan_rank
    }

    pub fn num_rays(&self) -> usize {
        self.num_rays
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn class_of(&self, d: &TDivisor) -> Result<PicClass, Error> {
        if d.len() != self.num_rays {
            return Err(Error::LengthMismatch { expected: self.num_rays, found: d.len() });
        }
        Ok(PicClass(self.to_class.iter().map(|row| dot(row, d.coeffs())).collect()))
    }

    /// A torus-invariant divisor in the given class.
    pub fn divisor_of(&self, c: &PicClass) -> TDivisor {
        assert_eq!(c.0.len(), self.rank());
        let mut out = TDivisor::zero(self.num_rays);
        for (lift, &k) in self.lifts.iter().zip(&c.0) {
            if k != 0 {
                out = &out + &lift.scale(k);
            }
        }
        out
    }

    /// Change of basis to a user-chosen basis of Pic given by divisors.
    ///
    /// Returns `(to_basis, from_basis)`: integer matrices converting canonical
    /// coordinates to coordinates in the given basis and back.
    pub fn basis_change(&self, basis: &[TDivisor]) -> Result<(IntMatrix, IntMatrix), Error> {
        if basis.len() != self.rank() {
            return Err(Error::LengthMismatch { expected: self.rank(), found: basis.len() });
        }
        let cols: Vec<Vec<i64>> =
            basis.iter().map(|d| self.class_of(d).map(|c| c.0)).collect::<Result<_, _>>()?;
        let from_basis = IntMatrix::from_columns(self.rank(), &cols);
        let to_basis = from_basis
            .unimodular_inverse()
            .ok_or_else(|| Error::InvalidArgument("divisors do not form a basis of Pic".into()))?;
        Ok((to_basis, from_basis))
    }
}

/// Applies an integer matrix to a class (`ρ × ρ` times a column vector).
pub fn apply_to_class(m: &IntMatrix, c: &PicClass) -> Result<PicClass, Error> {
    m.apply(&c.0).into_iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect::<Result<_, _>>().map(PicClass)
}

/// The relation `Σ b_ρ v_ρ = 0` of a wall, normalized so that the two rays
/// completing the ridge have coefficient 1. Supported on those two rays and
/// the ridge.
pub fn wall_relation(fan: &Fan, wall: &Wall) -> Result<Vec<i64>, Error> {
    let n = fan.rank();
    let mut cols: Vec<&[i64]> = wall.ridge.iter().map(|&i| fan.ray(i)).collect();
    cols.push(fan.ray(wall.left_ray));
    let basis = IntMatrix::from_columns(n, &cols);
    let target: Vec<BigInt> = fan.ray(wall.right_ray).iter().map(|&x| x.into()).collect();
    let x = solve_rational(&basis, &target).ok_or(Error::SingularWall)?;
    if x.iter().any(|c| !c.is_integer()) || x[n - 1] != BigRational::from_integer((-1).into()) {
        return Err(Error::SingularWall);
    }
    let mut b = vec![0i64; fan.num_rays()];
    b[wall.left_ray] = 1;
    b[wall.right_ray] = 1;
    for (k, &i) in wall.ridge.iter().enumerate() {
        b[i] = -x[k].to_integer().to_i64().ok_or(Error::Overflow)?;
    }
    Ok(b)
}

/// Degree of a divisor on a wall curve, given the wall's relation.
pub fn intersect(d: &TDivisor, relation: &[i64]) -> i64 {
    dot(d.coeffs(), relation)
}

/// Wall curves of a smooth complete fan with their relations, for repeated
/// nef/ample tests.
#[derive(Clone, Debug)]
pub struct CurveDegrees {
    walls: Vec<Wall>,
    relations: Vec<Vec<i64>>,
}

impl CurveDegrees {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        let walls = fan.walls()?;
        let relations = walls.iter().map(|w| wall_relation(fan, w)).collect::<Result<_, _>>()?;
        Ok(CurveDegrees { walls, relations })
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    /// `D·C` for every wall curve `C`, in wall order.
    pub fn degrees(&self, d: &TDivisor) -> Vec<i64> {
        self.relations.iter().map(|b| intersect(d, b)).collect()
    }

    pub fn is_nef(&self, d: &TDivisor) -> bool {
        self.relations.iter().all(|b| intersect(d, b) >= 0)
    }

    pub fn is_ample(&self, d: &TDivisor) -> bool {
        self.relations.iter().all(|b| intersect(d, b) > 0)
    }
}

pub fn is_nef(fan: &Fan, d: &TDivisor) -> Result<bool, Error> {
    Ok(CurveDegrees::new(fan)?.is_nef(d))
}

pub fn is_ample(fan: &Fan, d: &TDivisor) -> Result<bool, Error> {
    Ok(CurveDegrees::new(fan)?.is_ample(d))
}

/// `−K = Σ_ρ D_ρ`.
pub fn anticanonical(fan: &Fan) -> TDivisor {
    TDivisor(vec![1; fan.num_rays()])
}

pub fn is_fano(fan: &Fan) -> Result<bool, Error> {
    is_ample(fan, &anticanonical(fan))
}

/// Self-intersection `D·D` on a smooth complete surface: `Σ_ρ a_ρ (D·D_ρ)`,
/// the curve `D_ρ` being the wall whose ridge is `{ρ}`.
pub fn surface_self_intersection(fan: &Fan, d: &TDivisor) -> Result<i64, Error> {
    if fan.rank() != 2 {
        return Err(Error::DimensionMismatch);
    }
    let cd = CurveDegrees::new(fan)?;
    Ok(cd.walls.iter().zip(&cd.relations).map(|(w, b)| d.coeffs()[w.ridge[0]] * intersect(d, b)).sum())
}

/// Precomputed vertex solvers for the hyperplane arrangement
/// `{⟨m, v_ρ⟩ = −a_ρ}`: for each linearly independent `n`-subset of rays,
/// the adjugate and determinant of its matrix.
#[derive(Clone, Debug)]
pub struct Arrangement {
    rank: usize,
    rays: Vec<Vec<i64>>,
    systems: Vec<(Vec<usize>, Vec<Vec<i64>>, i64)>,
}

impl Arrangement {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        let n = fan.rank();
        let m = fan.num_rays();
        let mut systems = Vec::new();
        let mut subset: Vec<usize> = (0..n).collect();
        if n <= m {
            loop {
                // rows = rays of the subset; m ↦ (⟨m, v⟩)
                let rows: Vec<&[i64]> = subset.iter().map(|&i| fan.ray(i)).collect();
                let a = IntMatrix::from_rows(n, &rows);
                let det = a.det();
                if !det.is_zero() {
                    let adj = adjugate(&a)?;
                    systems.push((subset.clone(), adj, det.to_i64().ok_or(Error::Overflow)?));
                }
                // next combination
                let mut k = n;
                while k > 0 && subset[k - 1] == m - n + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                subset[k - 1] += 1;
                for j in k..n {
                    subset[j] = subset[j - 1] + 1;
                }
            }
        }
        Ok(Arrangement { rank: n, rays: fan.rays().to_vec(), systems })
    }

    /// Each vertex `m` of the arrangement, as `(numerators, denominator)` with
    /// positive denominator.
    pub fn vertices(&self, d: &TDivisor) -> Vec<(Vec<i64>, i64)> {
        self.systems
            .iter()
            .map(|(subset, adj, det)| {
                let rhs: Vec<i64> = subset.iter().map(|&i| -d.coeffs()[i]).collect();
                let mut num: Vec<i64> = adj.iter().map(|row| dot(row, &rhs)).collect();
                let mut den = *det;
                if den < 0 {
                    den = -den;
                    num.iter_mut().for_each(|x| *x = -*x);
                }
                (num, den)
            })
            .collect()
    }

    /// Integer bounding box of all arrangement vertices.
    pub fn bounding_box(&self, d: &TDivisor) -> (Vec<i64>, Vec<i64>) {
        bbox(self.rank, self.vertices(d).iter())
    }

    /// Integer bounding box of the vertices of `P_D = {m : ⟨m, v_ρ⟩ ≥ −a_ρ}`;
    /// `None` if the polytope is empty.
    pub fn polytope_box(&self, d: &TDivisor) -> Option<(Vec<i64>, Vec<i64>)> {
        let verts = self.vertices(d);
        let inside: Vec<_> = verts
            .iter()
            .filter(|(num, den)| {
                self.rays.iter().zip(d.coeffs()).all(|(v, &a)| dot(v, num) >= -a * den)
            })
            .collect();
        if inside.is_empty() {
            None
        } else {
            Some(bbox(self.rank, inside.into_iter()))
        }
    }
}

fn bbox<'a>(n: usize, verts: impl Iterator<Item = &'a (Vec<i64>, i64)>) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    let mut any = false;
    for (num, den) in verts {
        any = true;
        for k in 0..n {
            lo[k] = lo[k].min(Integer::div_floor(&num[k], den));
            hi[k] = hi[k].max(Integer::div_ceil(&num[k], den));
        }
    }
    if !any {
        return (vec![0; n], vec![0; n]);
    }
    (lo, hi)
}

pub(crate) fn adjugate(a: &IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    let n = a.rows();
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            for (r, ii) in (0..n).filter(|&x| x != i).enumerate() {
                for (c, jj) in (0..n).filter(|&x| x != j).enumerate() {
                    minor[(r, c)] = a[(ii, jj)].clone();
                }
            }
            let cof = minor.det();
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            // adj = transpose of the cofactor matrix
            adj[j][i] = cof.to_i64().ok_or(Error::Overflow)?;
        }
    }
    Ok(adj)
}

/// Iterates the integer points of a box in lexicographic order.
pub(crate) fn for_each_point(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut p = lo.to_vec();
    loop {
        f(&p);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if p[k] < hi[k] {
                p[k] += 1;
                p[k + 1..n].copy_from_slice(&lo[k + 1..n]);
                break;
            }
        }
    }
}

/// Lattice points of `P_D = {m : ⟨m, v_ρ⟩ ≥ −a_ρ ∀ρ}`, in lexicographic order.
pub fn polytope_points(fan: &Fan, d: &TDivisor) -> Result<Vec<Vec<i64>>, Error> {
    if d.len() != fan.num_rays() {
        return Err(Error::LengthMismatch { expected: fan.num_rays(), found: d.len() });
    }
    let arr = Arrangement::new(fan)?;
    let Some((lo, hi)) = arr.polytope_box(d) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for_each_point(&lo, &hi, |m| {
        if fan.rays().iter().zip(d.coeffs()).all(|(v, &a)| dot(v, m) >= -a) {
            out.push(m.to_vec());
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn picard_ranks() {
        let p2 = catalog::projective_space(2);
        assert_eq!(PicardLattice::new(&p2).unwrap().rank(), 1);
        let p3 = catalog::projective_space(3);
        assert_eq!(PicardLattice::new(&p3).unwrap().rank(), 1);
        let dp6p1 = catalog::dp6().product(&catalog::projective_space(1));
        assert_eq!(PicardLattice::new(&dp6p1).unwrap().rank(), 5);
        let not_spanning = Fan::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0], vec![1]]);
        assert_eq!(PicardLattice::new(&not_spanning).unwrap_err(), Error::Torsion);
        let torsion = Fan::new(1, vec![vec![2], vec![-2]], vec![vec![0], vec![1]]);
        assert_eq!(PicardLattice::new(&torsion).unwrap_err(), Error::Torsion);
    }

    #[test]
    fn class_of_examples() {
        let p1 = catalog::projective_space(1);
        let lat = PicardLattice::new(&p1).unwrap();
        assert!(lat.class_of(&TDivisor::zero(2)).unwrap().is_zero());
        assert_eq!(lat.class_of(&TDivisor::prime(2, 0)).unwrap(), lat.class_of(&TDivisor::prime(2, 1)).unwrap());
        assert!(lat.class_of(&TDivisor::zero(3)).is_err());
        let fa = catalog::hirzebruch(3);
        let lat = PicardLattice::new(&fa).unwrap();
        let u1 = fa.ray_index(&[-1, 3]).unwrap();
        let u3 = fa.ray_index(&[1, 0]).unwrap();
        assert_eq!(lat.class_of(&TDivisor::prime(4, u1)).unwrap(), lat.class_of(&TDivisor::prime(4, u3)).unwrap());
        // round trip through lifts
        let c = PicClass::new(vec![2, -5]);
        assert_eq!(lat.class_of(&lat.divisor_of(&c)).unwrap(), c);
    }

    #[test]
    fn wall_relations() {
        let p2 = catalog::projective_space(2);
        for w in p2.walls().unwrap() {
            assert_eq!(wall_relation(&p2, &w).unwrap(), vec![1, 1, 1]);
        }
        let p1p1 = catalog::p1xp1();
        for w in p1p1.walls().unwrap() {
            let b = wall_relation(&p1p1, &w).unwrap();
            assert_eq!(b[w.ridge[0]], 0);
            assert_eq!((b[w.left_ray], b[w.right_ray]), (1, 1));
        }
        let f2 = catalog::hirzebruch(2);
        let e2 = f2.ray_index(&[0, 1]).unwrap();
        let w = f2.walls().unwrap().into_iter().find(|w| w.ridge == vec![e2]).unwrap();
        let b = wall_relation(&f2, &w).unwrap();
        let (u1, u3, u4) =
            (f2.ray_index(&[-1, 2]).unwrap(), f2.ray_index(&[1, 0]).unwrap(), f2.ray_index(&[0, -1]).unwrap());
        assert_eq!((b[u1], b[e2], b[u3], b[u4]), (1, -2, 1, 0));
    }

    #[test]
    fn nef_and_ample() {
        let p2 = catalog::projective_space(2);
        let cd = CurveDegrees::new(&p2).unwrap();
        let h = TDivisor::prime(3, 0);
        assert!(cd.degrees(&h).iter().all(|&x| x == 1));
        assert!(cd.degrees(&h.scale(-3)).iter().all(|&x| x == -3));
        assert!(cd.is_nef(&h) && cd.is_ample(&h));
        assert!(!cd.is_nef(&h.scale(-1)) && !cd.is_ample(&h.scale(-1)));
        let f2 = catalog::hirzebruch(2);
        let cd = CurveDegrees::new(&f2).unwrap();
        let e2 = f2.ray_index(&[0, 1]).unwrap();
        // D_{e2} is the (−2)-curve
        assert!(cd.degrees(&TDivisor::prime(4, e2)).contains(&-2));
        assert!(!cd.is_nef(&TDivisor::prime(4, e2)));
        assert!(cd.degrees(&anticanonical(&f2)).contains(&0));
        assert!(!is_fano(&f2).unwrap());
        assert!(is_fano(&catalog::projective_space(3)).unwrap());
    }

    #[test]
    fn polytopes() {
        let p2 = catalog::projective_space(2);
        assert_eq!(polytope_points(&p2, &TDivisor::prime(3, 0)).unwrap().len(), 3);
        assert_eq!(polytope_points(&p2, &TDivisor::zero(3)).unwrap(), vec![vec![0, 0]]);
        assert!(polytope_points(&p2, &TDivisor::prime(3, 0).scale(-1)).unwrap().is_empty());
        let p3 = catalog::projective_space(3);
        assert_eq!(polytope_points(&p3, &anticanonical(&p3)).unwrap().len(), 35);
    }

    #[test]
    fn dp6_intersection_numbers() {
        let (fan, h, e) = catalog::dp6_blowup_basis();
        assert_eq!(surface_self_intersection(&fan, &h).unwrap(), 1);
        for ei in &e {
            assert_eq!(surface_self_intersection(&fan, ei).unwrap(), -1);
        }
    }
}
