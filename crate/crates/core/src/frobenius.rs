//! Line bundle summands of the toric Frobenius pushforward `(F_ℓ)_* O_X`.
//!
//! The summands of `(F_ℓ)_* O_X` are the classes of
//! `Σ_ρ ⌊⟨t, v_ρ⟩ / ℓ⌋ D_ρ` for `t` running over representatives of `M/ℓM`.
//! Writing `u = t/ℓ ∈ [0,1)^n`, the union over all `ℓ` is the set of floor
//! vectors `b_ρ = ⌊⟨u, v_ρ⟩⌋` realized by some rational `u` in the half-open
//! unit cube; [`frob_set`] enumerates those chambers exactly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::divisor::{dot, for_each_point, CurveDegrees, PicClass, PicardLattice, TDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::lattice::{rational_feasible, LinearConstraint};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrobeniusSet {
    pub classes: BTreeSet<PicClass>,
    /// Classes contributed by each level `ℓ`, when computed by a sweep.
    pub per_level: Option<BTreeMap<u32, BTreeSet<PicClass>>>,
}

impl FrobeniusSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn require_smooth_complete(fan: &Fan) -> Result<(), Error> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// Summands of `(F_ℓ)_* O_X` with multiplicities; the multiplicities sum to `ℓ^n`.
pub fn frob_summands(fan: &Fan, lat: &PicardLattice, level: u32) -> Result<BTreeMap<PicClass, u64>, Error> {
    require_smooth_complete(fan)?;
    if level == 0 {
        return Err(Error::InvalidArgument("Frobenius level must be positive".into()));
    }
    let l = i64::from(level);
    let n = fan.rank();
    let mut out: BTreeMap<PicClass, u64> = BTreeMap::new();
    let mut err = None;
    for_each_point(&vec![0; n], &vec![l - 1; n], |t| {
        let floors: Vec<i64> = fan.rays().iter().map(|v| dot(v, t).div_euclid(l)).collect();
        match lat.class_of(&TDivisor::new(floors)) {
            Ok(c) => *out.entry(c).or_default() += 1,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Union of the summand classes for `ℓ = 1..=max_level`.
pub fn frob_sweep(fan: &Fan, lat: &PicardLattice, max_level: u32) -> Result<FrobeniusSet, Error> {
    let mut classes = BTreeSet::new();
    let mut per_level = BTreeMap::new();
    for l in 1..=max_level {
        let level: BTreeSet<PicClass> = frob_summands(fan, lat, l)?.into_keys().collect();
        classes.extend(level.iter().cloned());
        per_level.insert(l, level);
    }
    Ok(FrobeniusSet { classes, per_level: Some(per_level) })
}

/// Constraints `0 ≤ u_i < 1`.
fn unit_cube(n: usize) -> Vec<LinearConstraint> {
    let mut sys = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        sys.push(LinearConstraint::integral(&e, 0, false));
        e[i] = -1;
        sys.push(LinearConstraint::integral(&e, -1, true));
    }
    sys
}

/// Constraints `b ≤ ⟨u, v⟩ < b + 1`.
fn floor_constraints(v: &[i64], b: i64) -> [LinearConstraint; 2] {
    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
    [LinearConstraint::integral(v, b, false), LinearConstraint::integral(&neg, -(b + 1), true)]
}

/// All floor vectors `(⌊⟨u, v_ρ⟩⌋)_ρ` realized by rational `u ∈ [0,1)^n`.
///
/// Depth-first over rays; a partial assignment is extended only while the
/// accumulated system stays feasible.
pub fn floor_vectors(fan: &Fan) -> Result<Vec<Vec<i64>>, Error> {
    let n = fan.rank();
    let ranges: Vec<(i64, i64)> = fan
        .rays()
        .iter()
        .map(|v| (v.iter().filter(|&&x| x < 0).sum(), v.iter().filter(|&&x| x > 0).sum()))
        .collect();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    let mut sys = unit_cube(n);
    descend(fan, &ranges, &mut prefix, &mut sys, &mut out)?;
    Ok(out)
}

fn descend(
    fan: &Fan,
    ranges: &[(i64, i64)],
    prefix: &mut Vec<i64>,
    sys: &mut Vec<LinearConstraint>,
    out: &mut Vec<Vec<i64>>,
) -> Result<(), Error> {
    let k = prefix.len();
    if k == fan.num_rays() {
        out.push(prefix.clone());
        return Ok(());
    }
    let v = fan.ray(k);
    let (lo, hi) = ranges[k];
    for b in lo..=hi {
        sys.extend(floor_constraints(v, b));
        if rational_feasible(sys)?.is_some() {
            prefix.push(b);
            descend(fan, ranges, prefix, sys, out)?;
            prefix.pop();
        }
        sys.truncate(sys.len() - 2);
    }
    Ok(())
}

/// The finite set of classes occurring in `(F_ℓ)_* O_X` for some `ℓ ≥ 1`,
/// computed exactly by chamber enumeration.
pub fn frob_set(fan: &Fan, lat: &PicardLattice) -> Result<FrobeniusSet, Error> {
    require_smooth_complete(fan)?;
    let classes = floor_vectors(fan)?
        .into_iter()
        .map(|b| lat.class_of(&TDivisor::new(b)))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(FrobeniusSet { classes, per_level: None })
}

/// Frobenius classes `c` with `−c` nef.
pub fn frob_antinef(fan: &Fan, lat: &PicardLattice) -> Result<BTreeSet<PicClass>, Error> {
    let all = frob_set(fan, lat)?;
    let curves = CurveDegrees::new(fan)?;
    Ok(all.classes.into_iter().filter(|c| curves.is_nef(&-&lat.divisor_of(c))).collect())
}
