//! Lattice automorphisms of a fan and their action on the Picard group.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::divisor::{adjugate, apply_to_class, PicClass, PicardLattice, TDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::lattice::IntMatrix;

/// An element of `GL(N)` permuting the fan's cones, with the induced ray
/// permutation: `matrix · v_ρ = v_{ray_perm[ρ]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FanAutomorphism {
    pub matrix: IntMatrix,
    pub ray_perm: Vec<usize>,
}

impl FanAutomorphism {
    pub fn identity(fan: &Fan) -> Self {
        FanAutomorphism { matrix: IntMatrix::identity(fan.rank()), ray_perm: (0..fan.num_rays()).collect() }
    }

    /// Checks that `matrix` is unimodular and preserves the fan.
    pub fn from_matrix(fan: &Fan, matrix: IntMatrix) -> Option<Self> {
        if matrix.rows() != fan.rank() || !matrix.is_square() || !matrix.det().abs().is_one() {
            return None;
        }
        let m = matrix.to_i64_rows().ok()?;
        let ray_perm = map_rays(&m, fan, fan)?;
        preserves_cones(&ray_perm, fan, fan).then_some(FanAutomorphism { matrix, ray_perm })
    }

    /// Recovers the matrix from a ray permutation.
    pub fn from_ray_perm(fan: &Fan, ray_perm: Vec<usize>) -> Option<Self> {
        if ray_perm.len() != fan.num_rays() || fan.num_max_cones() == 0 {
            return None;
        }
        let cone = &fan.max_cones()[0];
        let src = fan.cone_matrix(0);
        let images: Vec<&[i64]> = cone.iter().map(|&i| fan.ray(ray_perm[i])).collect();
        let dst = IntMatrix::from_columns(fan.rank(), &images);
        let matrix = solve_matrix(&dst, &src)?;
        let auto = FanAutomorphism::from_matrix(fan, matrix)?;
        (auto.ray_perm == ray_perm).then_some(auto)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FanAutomorphism) -> FanAutomorphism {
        FanAutomorphism {
            matrix: &self.matrix * &other.matrix,
            ray_perm: other.ray_perm.iter().map(|&i| self.ray_perm[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.ray_perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.ray_perm.clone();
        while p.iter().enumerate().any(|(i, &j)| i != j) {
            p = p.iter().map(|&i| self.ray_perm[i]).collect();
            k += 1;
        }
        k
    }
}

/// `dst · src⁻¹` if it is integral.
fn solve_matrix(dst: &IntMatrix, src: &IntMatrix) -> Option<IntMatrix> {
    let inv_t = crate::lattice::solve_rational; // column-by-column over the transpose
    let n = src.rows();
    // X · src = dst  ⇔  srcᵀ · Xᵀ = dstᵀ
    let st = src.transpose();
    let mut x = IntMatrix::zeros(n, n);
    for i in 0..n {
        let rhs: Vec<BigInt> = dst.row(i).to_vec();
        let row = inv_t(&st, &rhs)?;
        for (j, r) in row.into_iter().enumerate() {
            if !r.is_integer() {
                return None;
            }
            x[(i, j)] = r.to_integer();
        }
    }
    Some(x)
}

fn map_rays(m: &[Vec<i64>], src: &Fan, dst: &Fan) -> Option<Vec<usize>> {
    let index: BTreeMap<&[i64], usize> = dst.rays().iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let mut perm = Vec::with_capacity(src.num_rays());
    let mut seen = vec![false; dst.num_rays()];
    for r in src.rays() {
        let image: Vec<i64> = m.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect();
        let &j = index.get(image.as_slice())?;
        if seen[j] {
            return None;
        }
        seen[j] = true;
        perm.push(j);
    }
    Some(perm)
}

fn preserves_cones(perm: &[usize], src: &Fan, dst: &Fan) -> bool {
    let cones: BTreeSet<&Vec<usize>> = dst.max_cones().iter().collect();
    src.max_cones().iter().all(|c| {
        let mut image: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
        image.sort_unstable();
        cones.contains(&image)
    })
}

pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// All lattice isomorphisms carrying `src` onto `dst`.
///
/// A fixed maximal cone of `src` (a spanning ray subset) must land on some
/// maximal cone of `dst` in some order; each choice determines the matrix,
/// which is kept if integral, unimodular, and cone-preserving.
fn isomorphisms(src: &Fan, dst: &Fan, first_only: bool) -> Vec<FanAutomorphism> {
    let n = src.rank();
    if n != dst.rank() || src.num_rays() != dst.num_rays() || src.num_max_cones() != dst.num_max_cones() {
        return Vec::new();
    }
    if src.num_max_cones() == 0 {
        return Vec::new();
    }
    let base = src.cone_matrix(0);
    let (Ok(adj), Some(det)) = (adjugate(&base), base.det().to_i64()) else {
        return Vec::new();
    };
    let orders = permutations(&(0..n).collect::<Vec<_>>());
    let mut out = Vec::new();
    for target in dst.max_cones() {
        'order: for order in &orders {
            // matrix = W · adj(base) / det(base), W the chosen image columns
            let mut m = vec![vec![0i64; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    let s: i64 = (0..n).map(|k| dst.ray(target[order[k]])[i] * adj[k][j]).sum();
                    if s % det != 0 {
                        continue 'order;
                    }
                    *x = s / det;
                }
            }
            let Some(perm) = map_rays(&m, src, dst) else {
                continue;
            };
            if !preserves_cones(&perm, src, dst) {
                continue;
            }
            let matrix = IntMatrix::from_rows(n, &m);
            if matrix.det().abs().is_one() {
                out.push(FanAutomorphism { matrix, ray_perm: perm });
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

/// A lattice isomorphism from `src` onto `dst`, if one exists. The returned
/// `ray_perm` maps `src` ray indices to `dst` ray indices.
pub fn fan_isomorphism(src: &Fan, dst: &Fan) -> Option<FanAutomorphism> {
    isomorphisms(src, dst, true).pop()
}

/// A group of fan automorphisms, ordered by ray permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanAutGroup {
    elements: Vec<FanAutomorphism>,
}

/// Order, abelianness and element orders: enough to tell the small groups
/// in the tables apart without an isomorphism solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub element_orders: Vec<usize>,
}

impl FanAutGroup {
    /// The full automorphism group `Aut(Σ)`.
    pub fn full(fan: &Fan) -> Self {
        let mut elements = isomorphisms(fan, fan, false);
        elements.sort_by(|a, b| a.ray_perm.cmp(&b.ray_perm));
        elements.dedup_by(|a, b| a.ray_perm == b.ray_perm);
        FanAutGroup { elements }
    }

    pub fn trivial(fan: &Fan) -> Self {
        FanAutGroup { elements: vec![FanAutomorphism::identity(fan)] }
    }

    /// Closure of the given automorphisms under composition.
    pub fn generated_by(fan: &Fan, generators: &[FanAutomorphism]) -> Self {
        let id = FanAutomorphism::identity(fan);
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.ray_perm.clone());
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in generators {
                let h = s.compose(&g);
                if seen.insert(h.ray_perm.clone()) {
                    elements.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        elements.sort_by(|a, b| a.ray_perm.cmp(&b.ray_perm));
        FanAutGroup { elements }
    }

    /// Wraps explicit elements after checking the group axioms.
    pub fn from_elements(mut elements: Vec<FanAutomorphism>) -> Result<Self, Error> {
        elements.sort_by(|a, b| a.ray_perm.cmp(&b.ray_perm));
        elements.dedup_by(|a, b| a.ray_perm == b.ray_perm);
        let g = FanAutGroup { elements };
        if g.is_closed() {
            Ok(g)
        } else {
            Err(Error::NotAGroup)
        }
    }

    pub fn elements(&self) -> &[FanAutomorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Identity present, every product and inverse present.
    pub fn is_closed(&self) -> bool {
        let perms: BTreeSet<&Vec<usize>> = self.elements.iter().map(|g| &g.ray_perm).collect();
        if !self.elements.iter().any(FanAutomorphism::is_identity) {
            return false;
        }
        for a in &self.elements {
            for b in &self.elements {
                if !perms.contains(&a.compose(b).ray_perm) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains(&self, g: &FanAutomorphism) -> bool {
        self.elements.binary_search_by(|e| e.ray_perm.cmp(&g.ray_perm)).is_ok()
    }

    pub fn summary(&self) -> GroupSummary {
        let mut element_orders: Vec<usize> = self.elements.iter().map(FanAutomorphism::order).collect();
        element_orders.sort_unstable();
        let abelian = self
            .elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.compose(b).ray_perm == b.compose(a).ray_perm));
        GroupSummary { order: self.order(), abelian, element_orders }
    }
}

/// A group together with its matrices on canonical Picard coordinates.
#[derive(Clone, Debug)]
pub struct PicAction {
    group: FanAutGroup,
    matrices: Vec<IntMatrix>,
}

impl PicAction {
    /// `g` sends `class_of(D)` to `class_of(g·D)`, where `g·D` moves the
    /// coefficient of `D_ρ` to `D_{gρ}`.
    pub fn new(group: FanAutGroup, lat: &PicardLattice) -> Result<Self, Error> {
        let r = lat.rank();
        let mut matrices = Vec::with_capacity(group.order());
        for g in &group.elements {
            let mut cols = Vec::with_capacity(r);
            for k in 0..r {
                let mut e = vec![0; r];
                e[k] = 1;
                let d: TDivisor = lat.divisor_of(&PicClass::new(e)).permuted(&g.ray_perm);
                cols.push(lat.class_of(&d)?.coords().to_vec());
            }
            matrices.push(IntMatrix::from_columns(r, &cols));
        }
        Ok(PicAction { group, matrices })
    }

    pub fn group(&self) -> &FanAutGroup {
        &self.group
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn apply(&self, element: usize, c: &PicClass) -> PicClass {
        apply_to_class(&self.matrices[element], c).expect("Picard action entries fit in 64 bits")
    }

    /// Rank of `Pic(X)^G`: the common kernel of all `g − 1` over ℚ.
    pub fn invariant_rank(&self) -> usize {
        let r = self.matrices.first().map_or(0, IntMatrix::rows);
        let mut stacked = IntMatrix::zeros(r * self.matrices.len(), r);
        for (k, m) in self.matrices.iter().enumerate() {
            for i in 0..r {
                for j in 0..r {
                    let mut x = m[(i, j)].clone();
                    if i == j {
                        x -= 1;
                    }
                    stacked[(k * r + i, j)] = x;
                }
            }
        }
        r - stacked.rank()
    }

    /// Is the class set closed under every group element?
    pub fn is_stable(&self, classes: &[PicClass]) -> bool {
        self.first_escape(classes).is_none()
    }

    /// The first `(item, element)` whose image leaves the set.
    pub fn first_escape(&self, classes: &[PicClass]) -> Option<(usize, usize)> {
        let set: BTreeSet<&PicClass> = classes.iter().collect();
        for (i, c) in classes.iter().enumerate() {
            for g in 0..self.matrices.len() {
                if !set.contains(&self.apply(g, c)) {
                    return Some((i, g));
                }
            }
        }
        None
    }

    /// Orbit partition, orbits ordered by first appearance in `classes` and
    /// members listed in input order.
    pub fn orbits(&self, classes: &[PicClass]) -> Result<Vec<Vec<PicClass>>, Error> {
        if !self.is_stable(classes) {
            return Err(Error::NotStable);
        }
        let mut assigned = vec![false; classes.len()];
        let mut out = Vec::new();
        for i in 0..classes.len() {
            if assigned[i] {
                continue;
            }
            let orbit: BTreeSet<PicClass> = (0..self.matrices.len()).map(|g| self.apply(g, &classes[i])).collect();
            let mut members = Vec::new();
            for (j, c) in classes.iter().enumerate() {
                if orbit.contains(c) {
                    assigned[j] = true;
                    members.push(c.clone());
                }
            }
            out.push(members);
        }
        Ok(out)
    }
}

/// Convenience: `Aut(Σ)` and its Picard action.
pub fn fan_automorphisms(fan: &Fan) -> FanAutGroup {
    FanAutGroup::full(fan)
}

pub fn pic_action(group: &FanAutGroup, lat: &PicardLattice) -> Result<PicAction, Error> {
    PicAction::new(group.clone(), lat)
}

/// Entry conversion helper for reports.
pub fn matrix_to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_i64().expect("small entry")).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn surface_group_orders() {
        assert_eq!(FanAutGroup::full(&catalog::projective_space(2)).order(), 6);
        assert_eq!(FanAutGroup::full(&catalog::p1xp1()).order(), 8);
        assert_eq!(FanAutGroup::full(&catalog::dp6()).order(), 12);
        assert_eq!(FanAutGroup::full(&catalog::hirzebruch(3)).order(), 2);
        assert_eq!(FanAutGroup::full(&catalog::projective_space(1)).order(), 2);
        assert_eq!(FanAutGroup::full(&Fan::point()).order(), 1);
    }

    #[test]
    fn group_axioms_and_summary() {
        let g = FanAutGroup::full(&catalog::dp6());
        assert!(g.is_closed());
        let s = g.summary();
        assert!(!s.abelian);
        assert_eq!(s.element_orders.iter().filter(|&&o| o == 6).count(), 2);
        let p1p1 = FanAutGroup::full(&catalog::p1xp1());
        assert!(!p1p1.summary().abelian);
    }

    #[test]
    fn generated_subgroups() {
        let fan = catalog::p1xp1();
        let swap = FanAutomorphism::from_matrix(&fan, IntMatrix::from_rows(2, &[[0, 1], [1, 0]])).unwrap();
        let g = FanAutGroup::generated_by(&fan, core::slice::from_ref(&swap));
        assert_eq!(g.order(), 2);
        assert!(g.is_closed());
        assert!(FanAutGroup::full(&fan).contains(&swap));
        let back = FanAutomorphism::from_ray_perm(&fan, swap.ray_perm.clone()).unwrap();
        assert_eq!(back, swap);
        assert!(FanAutomorphism::from_matrix(&fan, IntMatrix::from_rows(2, &[[1, 1], [0, 1]])).is_none());
        assert!(FanAutGroup::from_elements(vec![swap]).is_err());
    }

    #[test]
    fn pic_actions() {
        let p2 = catalog::projective_space(2);
        let lat = PicardLattice::new(&p2).unwrap();
        let act = PicAction::new(FanAutGroup::full(&p2), &lat).unwrap();
        assert!(act.matrices().iter().all(|m| *m == IntMatrix::identity(1)));
        assert_eq!(act.invariant_rank(), 1);

        let fa = catalog::hirzebruch(2);
        let lat = PicardLattice::new(&fa).unwrap();
        let act = PicAction::new(FanAutGroup::full(&fa), &lat).unwrap();
        assert!(act.matrices().iter().all(|m| *m == IntMatrix::identity(2)));

        let p1p1 = catalog::p1xp1();
        let lat = PicardLattice::new(&p1p1).unwrap();
        let act = PicAction::new(FanAutGroup::full(&p1p1), &lat).unwrap();
        assert_eq!(act.invariant_rank(), 1);
        let o = lat.class_of(&TDivisor::zero(4)).unwrap();
        assert_eq!(act.orbits(core::slice::from_ref(&o)).unwrap(), vec![vec![o.clone()]]);
        let e1 = lat.class_of(&TDivisor::prime(4, p1p1.ray_index(&[1, 0]).unwrap())).unwrap();
        assert_eq!(act.orbits(&[o, e1]), Err(Error::NotStable));
    }

    #[test]
    fn dp6_rotation_swaps_line_classes() {
        let (fan, h, e) = catalog::dp6_blowup_basis();
        let lat = PicardLattice::new(&fan).unwrap();
        let act = PicAction::new(FanAutGroup::full(&fan), &lat).unwrap();
        let h_cls = lat.class_of(&h).unwrap();
        let sum_e = e.iter().fold(TDivisor::zero(6), |acc, x| &acc + x);
        let h_prime = lat.class_of(&(&h.scale(2) - &sum_e)).unwrap();
        let rotations: Vec<usize> =
            (0..act.group().order()).filter(|&g| act.group().elements()[g].order() == 6).collect();
        assert_eq!(rotations.len(), 2);
        for g in rotations {
            assert_eq!(act.apply(g, &h_cls), h_prime);
            assert_eq!(act.apply(g, &h_prime), h_cls);
        }
    }

    #[test]
    fn isomorphism_search() {
        let w2 = catalog::weyl_a(2).unwrap();
        assert!(fan_isomorphism(&w2, &catalog::dp6()).is_some());
        assert!(fan_isomorphism(&catalog::p1xp1(), &catalog::hirzebruch(2)).is_none());
        assert!(fan_isomorphism(&catalog::p1xp1(), &catalog::hirzebruch(0)).is_some());
    }
}
