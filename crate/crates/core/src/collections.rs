//! Exceptional, strong and group-stable collections of line bundles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{CohomologyEngine, CohomologyTable};
use crate::divisor::PicClass;
use crate::error::Error;
use crate::fan::Fan;
use crate::symmetry::PicAction;

/// An ordered list of distinct line bundle classes, optionally cut into blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    items: Vec<PicClass>,
    /// Exclusive end index of each block, increasing, last equal to the length.
    block_bounds: Option<Vec<usize>>,
}

impl Collection {
    pub fn new(items: Vec<PicClass>) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for (i, c) in items.iter().enumerate() {
            if !seen.insert(c) {
                return Err(Error::DuplicateItem(i));
            }
        }
        Ok(Collection { items, block_bounds: None })
    }

    pub fn with_blocks(items: Vec<PicClass>, bounds: Vec<usize>) -> Result<Self, Error> {
        let mut c = Collection::new(items)?;
        let increasing = bounds.windows(2).all(|w| w[0] < w[1]);
        if !increasing || bounds.first() == Some(&0) || bounds.last() != Some(&c.items.len()) {
            return Err(Error::InvalidArgument("block bounds must increase to the collection length".into()));
        }
        c.block_bounds = Some(bounds);
        Ok(c)
    }

    pub fn items(&self) -> &[PicClass] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn block_bounds(&self) -> Option<&[usize]> {
        self.block_bounds.as_deref()
    }

    /// Block sizes from the declared bounds.
    pub fn block_sizes(&self) -> Option<Vec<usize>> {
        self.block_bounds.as_ref().map(|b| {
            let mut prev = 0;
            b.iter()
                .map(|&e| {
                    let s = e - prev;
                    prev = e;
                    s
                })
                .collect()
        })
    }

    /// Every item tensored with `twist`.
    pub fn twisted(&self, twist: &PicClass) -> Collection {
        Collection {
            items: self.items.iter().map(|c| c + twist).collect(),
            block_bounds: self.block_bounds.clone(),
        }
    }

    pub fn map_items(&self, f: impl Fn(&PicClass) -> PicClass) -> Result<Collection, Error> {
        let mut c = Collection::new(self.items.iter().map(f).collect())?;
        c.block_bounds = self.block_bounds.clone();
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtFailure {
    /// `Ext^•(E_i, E_i) ≠ (1, 0, …, 0)`.
    NotExceptionalObject,
    /// `Ext^degree(E_i, E_j) ≠ 0` with `i > j`.
    Backward,
    /// `Ext^degree(E_i, E_j) ≠ 0` with `i < j` and `degree > 0`.
    HigherForward,
}

/// A nonvanishing `Ext^degree(E_i, E_j)` of the given dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtWitness {
    pub kind: ExtFailure,
    pub i: usize,
    pub j: usize,
    pub degree: usize,
    pub dim: u64,
}

/// Orbits arranged as blocks, in an order compatible with Ext precedence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Item indices of each block.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub exceptional: bool,
    /// `None` when strongness was not requested.
    pub strong: Option<bool>,
    /// `None` when no group was supplied.
    pub stable: Option<bool>,
    pub blocks: Option<BlockDecomposition>,
    pub length: usize,
    pub k0: usize,
    pub failures: Vec<ExtWitness>,
    /// `(item, group element)` pairs whose image leaves the collection.
    pub unstable_items: Vec<(usize, usize)>,
}

impl CheckReport {
    pub fn length_matches_k0(&self) -> bool {
        self.length == self.k0
    }

    /// Every requested check passed (fullness is only the rank condition).
    pub fn passed(&self) -> bool {
        self.exceptional
            && self.strong.unwrap_or(true)
            && self.stable.unwrap_or(true)
            && self.length_matches_k0()
    }
}

/// `(length, #maximal cones, equal)`: equality is necessary for fullness.
pub fn fullness_rank_check(fan: &Fan, coll: &Collection) -> (usize, usize, bool) {
    (coll.len(), fan.num_max_cones(), coll.len() == fan.num_max_cones())
}

/// Runs the Ext computations behind every collection check, reusing one
/// cohomology engine.
#[derive(Debug)]
pub struct Verifier {
    engine: CohomologyEngine,
}

impl Verifier {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        Ok(Verifier { engine: CohomologyEngine::new(fan)? })
    }

    pub fn engine(&mut self) -> &mut CohomologyEngine {
        &mut self.engine
    }

    pub fn fan(&self) -> &Fan {
        self.engine.fan()
    }

    fn ext(&mut self, a: &PicClass, b: &PicClass) -> Result<CohomologyTable, Error> {
        self.engine.ext_classes(a, b)
    }

    fn witnesses(&mut self, coll: &Collection, strong: bool) -> Result<Vec<ExtWitness>, Error> {
        let items = coll.items();
        let mut out = Vec::new();
        for i in 0..items.len() {
            for j in 0..items.len() {
                let t = self.ext(&items[i], &items[j])?;
                let kind = match i.cmp(&j) {
                    core::cmp::Ordering::Equal => {
                        if !t.is_unit() {
                            for (degree, &dim) in t.dims().iter().enumerate() {
                                if (degree == 0 && dim != 1) || (degree > 0 && dim != 0) {
                                    out.push(ExtWitness { kind: ExtFailure::NotExceptionalObject, i, j, degree, dim });
                                }
                            }
                        }
                        continue;
                    }
                    core::cmp::Ordering::Greater => ExtFailure::Backward,
                    core::cmp::Ordering::Less if strong => ExtFailure::HigherForward,
                    core::cmp::Ordering::Less => continue,
                };
                for (degree, &dim) in t.dims().iter().enumerate() {
                    if dim != 0 && (kind == ExtFailure::Backward || degree > 0) {
                        out.push(ExtWitness { kind, i, j, degree, dim });
                    }
                }
            }
        }
        Ok(out)
    }

    fn base_report(&self, coll: &Collection, failures: Vec<ExtWitness>, strong: Option<bool>) -> CheckReport {
        let exceptional = failures.iter().all(|w| w.kind == ExtFailure::HigherForward);
        let (length, k0, _) = fullness_rank_check(self.fan(), coll);
        CheckReport { exceptional, strong, stable: None, blocks: None, length, k0, failures, unstable_items: Vec::new() }
    }

    /// Self-Exts are `(1, 0, …, 0)` and backward Exts vanish entirely.
    pub fn check_exceptional(&mut self, coll: &Collection) -> Result<CheckReport, Error> {
        let failures = self.witnesses(coll, false)?;
        Ok(self.base_report(coll, failures, None))
    }

    /// Exceptional, and forward Exts vanish in positive degrees.
    pub fn check_strong(&mut self, coll: &Collection) -> Result<CheckReport, Error> {
        let failures = self.witnesses(coll, true)?;
        let exceptional = failures.iter().all(|w| w.kind == ExtFailure::HigherForward);
        let strong = exceptional && failures.is_empty();
        Ok(self.base_report(coll, failures, Some(strong)))
    }

    /// Orbits of a stable collection as blocks: members of an orbit are
    /// mutually orthogonal, and the orbits are ordered so that every nonzero
    /// `Ext(A, B)` has `A`'s block first. Ties are broken by the position of
    /// each orbit's first item.
    pub fn decompose_blocks(&mut self, action: &PicAction, coll: &Collection) -> Result<BlockDecomposition, Error> {
        let items = coll.items();
        let orbits = action.orbits(items)?;
        let index: BTreeMap<&PicClass, usize> = items.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let orbit_idx: Vec<Vec<usize>> = orbits.iter().map(|o| o.iter().map(|c| index[c]).collect()).collect();
        let mut owner = vec![0; items.len()];
        for (k, o) in orbit_idx.iter().enumerate() {
            for &i in o {
                owner[i] = k;
            }
        }
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); orbits.len()];
        for a in 0..items.len() {
            for b in 0..items.len() {
                if a == b {
                    continue;
                }
                if self.ext(&items[a], &items[b])?.is_zero() {
                    continue;
                }
                if owner[a] == owner[b] {
                    return Err(Error::OrbitNotOrthogonal);
                }
                succ[owner[a]].insert(owner[b]);
            }
        }
        let keys: Vec<usize> = orbit_idx.iter().map(|o| o[0]).collect();
        let order = topological_order(&succ, &keys)?;
        Ok(BlockDecomposition { blocks: order.into_iter().map(|k| orbit_idx[k].clone()).collect() })
    }

    /// Indices of declared blocks containing two items with a nonzero Ext.
    pub fn declared_block_defects(&mut self, coll: &Collection) -> Result<Vec<usize>, Error> {
        let Some(bounds) = coll.block_bounds() else {
            return Ok(Vec::new());
        };
        let items = coll.items();
        let mut bad = Vec::new();
        let mut start = 0;
        for (k, &end) in bounds.iter().enumerate() {
            'block: for a in start..end {
                for b in start..end {
                    if a != b && !self.ext(&items[a], &items[b])?.is_zero() {
                        bad.push(k);
                        break 'block;
                    }
                }
            }
            start = end;
        }
        Ok(bad)
    }

    /// Orders a set of classes so that the result has no backward Exts, if
    /// possible. Ties are broken by the canonical class ordering.
    pub fn order_by_ext(&mut self, classes: &BTreeSet<PicClass>) -> Result<Vec<PicClass>, Error> {
        let items: Vec<PicClass> = classes.iter().cloned().collect();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); items.len()];
        for a in 0..items.len() {
            for b in 0..items.len() {
                if a != b && !self.ext(&items[a], &items[b])?.is_zero() {
                    succ[a].insert(b);
                }
            }
        }
        let keys: Vec<usize> = (0..items.len()).collect();
        let order = topological_order(&succ, &keys)?;
        Ok(order.into_iter().map(|k| items[k].clone()).collect())
    }

    /// Every check at once: exceptional (and strong if asked), stability and
    /// block structure when a group action is given, and the rank condition.
    pub fn check(&mut self, coll: &Collection, action: Option<&PicAction>, strong: bool) -> Result<CheckReport, Error> {
        let mut report = if strong { self.check_strong(coll)? } else { self.check_exceptional(coll)? };
        if let Some(act) = action {
            let stab = check_stable(act, coll);
            report.stable = stab.stable;
            report.unstable_items = stab.unstable_items;
            if report.stable == Some(true) && report.exceptional {
                match self.decompose_blocks(act, coll) {
                    Ok(b) => report.blocks = Some(b),
                    Err(Error::OrbitNotOrthogonal | Error::CyclicOrder) => report.exceptional = false,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(report)
    }
}

/// Kahn's algorithm; among available nodes the smallest key goes first.
fn topological_order(succ: &[BTreeSet<usize>], keys: &[usize]) -> Result<Vec<usize>, Error> {
    let n = succ.len();
    let mut indegree = vec![0usize; n];
    for s in succ {
        for &t in s {
            indegree[t] += 1;
        }
    }
    let mut ready: BTreeSet<(usize, usize)> = (0..n).filter(|&v| indegree[v] == 0).map(|v| (keys[v], v)).collect();
    let mut out = Vec::with_capacity(n);
    while let Some((k, v)) = ready.iter().next().copied() {
        ready.remove(&(k, v));
        out.push(v);
        for &t in &succ[v] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.insert((keys[t], t));
            }
        }
    }
    if out.len() == n {
        Ok(out)
    } else {
        Err(Error::CyclicOrder)
    }
}

/// Stability: the item set is closed under every element of the group.
pub fn check_stable(action: &PicAction, coll: &Collection) -> CheckReport {
    let items = coll.items();
    let set: BTreeSet<&PicClass> = items.iter().collect();
    let mut unstable = Vec::new();
    for (i, c) in items.iter().enumerate() {
        for g in 0..action.group().order() {
            if !set.contains(&action.apply(g, c)) {
                unstable.push((i, g));
                break;
            }
        }
    }
    CheckReport {
        exceptional: false,
        strong: None,
        stable: Some(unstable.is_empty()),
        blocks: None,
        length: items.len(),
        k0: 0,
        failures: Vec::new(),
        unstable_items: unstable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::divisor::{PicardLattice, TDivisor};
    use crate::symmetry::FanAutGroup;

    fn classes(lat: &PicardLattice, divs: &[TDivisor]) -> Vec<PicClass> {
        divs.iter().map(|d| lat.class_of(d).unwrap()).collect()
    }

    #[test]
    fn beilinson_p2() {
        let p2 = catalog::projective_space(2);
        let lat = PicardLattice::new(&p2).unwrap();
        let h = TDivisor::prime(3, 0);
        let items = classes(&lat, &[TDivisor::zero(3), h.clone(), h.scale(2)]);
        let mut v = Verifier::new(&p2).unwrap();
        let coll = Collection::new(items.clone()).unwrap();
        let r = v.check_strong(&coll).unwrap();
        assert!(r.exceptional && r.strong == Some(true) && r.failures.is_empty());
        let rev: Vec<PicClass> = items.into_iter().rev().collect();
        let r = v.check_exceptional(&Collection::new(rev).unwrap()).unwrap();
        assert!(!r.exceptional);
        // Hom(O(1), O(2)) now points backward
        assert!(r.failures.contains(&ExtWitness { kind: ExtFailure::Backward, i: 1, j: 0, degree: 0, dim: 3 }));
    }

    #[test]
    fn p1_gap_two_is_not_exceptional() {
        let p1 = catalog::projective_space(1);
        let lat = PicardLattice::new(&p1).unwrap();
        let items = classes(&lat, &[TDivisor::zero(2), TDivisor::new(vec![2, 0])]);
        let r = Verifier::new(&p1).unwrap().check_exceptional(&Collection::new(items).unwrap()).unwrap();
        assert!(!r.exceptional);
        assert!(r.failures.iter().any(|w| w.kind == ExtFailure::Backward && w.degree == 1 && w.dim == 1));
    }

    #[test]
    fn stability_and_blocks_on_p1xp1() {
        let fan = catalog::p1xp1();
        let lat = PicardLattice::new(&fan).unwrap();
        let act = PicAction::new(FanAutGroup::full(&fan), &lat).unwrap();
        let (a, b) = (fan.ray_index(&[1, 0]).unwrap(), fan.ray_index(&[0, 1]).unwrap());
        let o = TDivisor::zero(4);
        let (d10, d01) = (TDivisor::prime(4, a), TDivisor::prime(4, b));
        let partial = Collection::new(classes(&lat, &[o.clone(), d10.clone()])).unwrap();
        assert_eq!(check_stable(&act, &partial).stable, Some(false));
        let full = Collection::new(classes(&lat, &[o, d10.clone(), d01.clone(), &d10 + &d01])).unwrap();
        let mut v = Verifier::new(&fan).unwrap();
        let blocks = v.decompose_blocks(&act, &full).unwrap();
        assert_eq!(blocks.blocks, vec![vec![0], vec![1, 2], vec![3]]);
        let r = v.check(&full, Some(&act), true).unwrap();
        assert!(r.passed());
        let declared = Collection::with_blocks(full.items().to_vec(), vec![1, 3, 4]).unwrap();
        assert!(v.declared_block_defects(&declared).unwrap().is_empty());
        let wrong = Collection::with_blocks(full.items().to_vec(), vec![2, 4]).unwrap();
        assert_eq!(v.declared_block_defects(&wrong).unwrap(), vec![0, 1]);
    }

    #[test]
    fn ordering_search() {
        let p3 = catalog::projective_space(3);
        let lat = PicardLattice::new(&p3).unwrap();
        let set: BTreeSet<PicClass> = (0..4).map(|k| lat.class_of(&TDivisor::new(vec![k, 0, 0, 0])).unwrap()).collect();
        let mut v = Verifier::new(&p3).unwrap();
        let order = v.order_by_ext(&set).unwrap();
        let r = v.check_strong(&Collection::new(order).unwrap()).unwrap();
        assert_eq!(r.strong, Some(true));
        // O(-2) and O(2) on P^1 have Exts in both directions
        let p1 = catalog::projective_space(1);
        let lat1 = PicardLattice::new(&p1).unwrap();
        let mut v1 = Verifier::new(&p1).unwrap();
        let pair: BTreeSet<PicClass> = [TDivisor::new(vec![-2, 0]), TDivisor::new(vec![2, 0])]
            .iter()
            .map(|d| lat1.class_of(d).unwrap())
            .collect();
        assert_eq!(v1.order_by_ext(&pair), Err(Error::CyclicOrder));
    }

    #[test]
    fn collection_invariants() {
        let c = PicClass::new(vec![1]);
        assert_eq!(Collection::new(vec![c.clone(), c.clone()]), Err(Error::DuplicateItem(1)));
        assert!(Collection::with_blocks(vec![c.clone()], vec![2]).is_err());
        assert_eq!(Collection::with_blocks(vec![c], vec![1]).unwrap().block_sizes(), Some(vec![1]));
    }
}
