//! Named varieties and collections: minimal toric surfaces, the smooth toric
//! Fano 3-folds, the centrally symmetric varieties `V_n`, and the fans of
//! Weyl chambers of type A.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::collections::{Collection, Verifier};
use crate::divisor::{is_fano, surface_self_intersection, PicardLattice, TDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::frobenius::{frob_antinef, frob_set};
use crate::lattice::IntMatrix;
use crate::symmetry::{fan_automorphisms, fan_isomorphism, pic_action, FanAutGroup, FanAutomorphism};

/// Expected invariants `(σ(1), k_0, |Aut(Σ)|, ρ, ρ^G, 𝔣𝔯, 𝔣𝔯⁻)`; unknown entries are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Invariants {
    pub rays: Option<usize>,
    pub k0: Option<usize>,
    pub aut: Option<usize>,
    pub rho: Option<usize>,
    pub rho_g: Option<usize>,
    pub fr: Option<usize>,
    pub fr_minus: Option<usize>,
}

impl Invariants {
    pub const fn row(rays: usize, k0: usize, aut: usize, rho: usize, rho_g: usize, fr: usize, fr_minus: usize) -> Self {
        Invariants {
            rays: Some(rays),
            k0: Some(k0),
            aut: Some(aut),
            rho: Some(rho),
            rho_g: Some(rho_g),
            fr: Some(fr),
            fr_minus: Some(fr_minus),
        }
    }

    pub const fn aut_only(aut: usize) -> Self {
        Invariants { rays: None, k0: None, aut: Some(aut), rho: None, rho_g: None, fr: None, fr_minus: None }
    }

    pub fn as_array(&self) -> [Option<usize>; 7] {
        [self.rays, self.k0, self.aut, self.rho, self.rho_g, self.fr, self.fr_minus]
    }
}

/// Outcome of a search over blowup centers (or twist classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Description of the chosen candidate, e.g. the center's ray vectors.
    pub chosen: String,
    /// Every candidate passing the filters, in canonical order.
    pub matches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub fan: Fan,
    pub expected: Option<Invariants>,
    pub provenance: &'static str,
    pub search: Option<SearchOutcome>,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, fan: Fan, expected: Option<Invariants>, provenance: &'static str) -> Self {
        CatalogEntry { name: name.into(), fan, expected, provenance, search: None }
    }
}

/// Invariants of the 18 smooth toric Fano threefolds, rows 1–18.
pub const FANO3_TABLE: [Invariants; 18] = [
    Invariants::row(4, 4, 24, 1, 1, 4, 4),
    Invariants::row(5, 6, 6, 2, 2, 7, 6),
    Invariants::row(5, 6, 6, 2, 2, 6, 6),
    Invariants::row(5, 6, 4, 2, 2, 6, 6),
    Invariants::row(5, 6, 12, 2, 2, 6, 6),
    Invariants::row(6, 8, 8, 3, 2, 8, 8),
    Invariants::row(6, 8, 8, 3, 3, 8, 8),
    Invariants::row(6, 8, 48, 3, 1, 8, 8),
    Invariants::row(6, 8, 4, 3, 3, 8, 8),
    Invariants::row(6, 8, 8, 3, 2, 8, 8),
    Invariants::row(6, 8, 2, 3, 3, 9, 8),
    Invariants::row(6, 8, 2, 3, 3, 8, 8),
    Invariants::row(7, 10, 2, 4, 4, 10, 10),
    Invariants::row(7, 10, 4, 4, 3, 10, 10),
    Invariants::row(7, 10, 4, 4, 3, 10, 10),
    Invariants::row(7, 10, 2, 4, 4, 10, 10),
    Invariants::row(8, 12, 24, 5, 2, 12, 12),
    Invariants::row(8, 12, 4, 5, 4, 12, 12),
];

pub const FANO3_NAMES: [&str; 18] = [
    "P^3",
    "P_{P^2}(O+O(2))",
    "P_{P^2}(O+O(1))",
    "P_{P^1}(O+O+O(1))",
    "P^2 x P^1",
    "P_{P^1xP^1}(O+O(1,1))",
    "P_{dP8}(O+O(l)), l^2 = 1",
    "P^1 x P^1 x P^1",
    "dP8 x P^1",
    "P_{P^1xP^1}(O+O(1,-1))",
    "Bl_{P^1}(P_{P^2}(O+O(1)))",
    "Bl_{P^1}(P^2 x P^1)",
    "dP7-bundle over P^1",
    "dP7-bundle over P^1",
    "dP7 x P^1",
    "dP7-bundle over P^1",
    "dP6 x P^1",
    "dP6-bundle over P^1",
];

/// Rows with a construction from named operations on smaller fans.
pub const FANO3_CONSTRUCTIBLE: [usize; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 15, 17];

pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n).map(|omit| (0..=n).filter(|&i| i != omit).collect()).collect();
    Fan::new(n, rays, cones).canonicalize().0
}

pub fn p1xp1() -> Fan {
    projective_space(1).product(&projective_space(1))
}

/// Hirzebruch surface `F_a` with rays `−e_1 + a e_2, e_2, e_1, −e_2`.
pub fn hirzebruch(a: i64) -> Fan {
    let base = projective_space(1);
    let pt = base.ray_index(&[-1]).expect("P^1 ray");
    base.projectivize(&[TDivisor::prime(2, pt).scale(a)]).expect("P^1 is smooth and complete")
}

/// Blowup of `P^2` at one torus-fixed point.
pub fn dp8() -> Fan {
    let p2 = projective_space(2);
    let cone = [p2.ray_index(&[1, 0]).unwrap(), p2.ray_index(&[0, 1]).unwrap()];
    p2.star_subdivision(&cone).expect("2-cone of P^2")
}

/// Blowup of `P^2` at two torus-fixed points.
pub fn dp7() -> Fan {
    let f = dp8();
    let cone = [f.ray_index(&[0, 1]).unwrap(), f.ray_index(&[-1, -1]).unwrap()];
    f.star_subdivision(&cone).expect("2-cone of dP8")
}

/// The hexagonal fan with rays `±e_1, ±e_2, ±(e_1 + e_2)`.
pub fn dp6() -> Fan {
    let rays = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]];
    let cones = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    Fan::new(2, rays, cones).canonicalize().0
}

/// `dP6` as `P^2` blown up at its three fixed points, with the pullback `H`
/// of a line and the exceptional curves `E_1, E_2, E_3`.
pub fn dp6_blowup_basis() -> (Fan, TDivisor, [TDivisor; 3]) {
    let fan = dp6();
    let d = |v: [i64; 2]| TDivisor::prime(6, fan.ray_index(&v).unwrap());
    let e = [d([1, 1]), d([-1, 0]), d([0, -1])];
    let h = &(&d([1, 0]) + &e[0]) + &e[2];
    (fan, h, e)
}

pub fn surface(name: &str) -> Result<CatalogEntry, Error> {
    let entry = match name {
        "P2" => CatalogEntry::new("P2", projective_space(2), Some(Invariants::aut_only(6)), "minimal surface P^2"),
        "P1xP1" => CatalogEntry::new("P1xP1", p1xp1(), Some(Invariants::aut_only(8)), "minimal surface P^1 x P^1"),
        "dP6" => CatalogEntry::new("dP6", dp6(), Some(Invariants::aut_only(12)), "del Pezzo surface of degree 6"),
        "dP7" => CatalogEntry::new("dP7", dp7(), None, "P^2 blown up in two fixed points"),
        "dP8" => CatalogEntry::new("dP8", dp8(), None, "P^2 blown up in one fixed point"),
        _ => {
            let a = name
                .strip_prefix('F')
                .and_then(|s| s.parse::<i64>().ok())
                .filter(|a| *a >= 0)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            let expected = (a >= 2).then_some(Invariants::aut_only(2));
            CatalogEntry::new(format!("F{a}"), hirzebruch(a), expected, "Hirzebruch surface")
        }
    };
    Ok(entry)
}

fn prime(fan: &Fan, v: &[i64]) -> TDivisor {
    TDivisor::prime(fan.num_rays(), fan.ray_index(v).expect("ray present"))
}

fn projectivize_one(base: &Fan, twist: TDivisor) -> Fan {
    base.projectivize(&[twist]).expect("smooth complete base")
}

fn isomorphic(a: &Fan, b: &Fan) -> bool {
    fan_isomorphism(a, b).is_some()
}

fn describe_cone(fan: &Fan, cone: &[usize]) -> String {
    let rays: Vec<&Vec<i64>> = cone.iter().map(|&i| &fan.rays()[i]).collect();
    format!("{rays:?}")
}

/// Blows up each torus-invariant curve (2-cone) of `ambient`, keeping Fano
/// results with the expected numbers of rays, cones and Picard rank that are
/// not isomorphic to any fan in `exclude`. The first survivor under the
/// canonical cone ordering is chosen; all survivors are reported.
pub fn blowup_search(
    ambient: &Fan,
    expected: &Invariants,
    exclude: &[Fan],
) -> Result<(Fan, SearchOutcome), Error> {
    let mut found: Vec<(Fan, String)> = Vec::new();
    for cone in ambient.all_cones().into_iter().filter(|c| c.len() == 2) {
        let fan = ambient.star_subdivision(&cone)?;
        if Some(fan.num_rays()) != expected.rays
            || Some(fan.num_max_cones()) != expected.k0
            || Some(fan.num_rays() - fan.rank()) != expected.rho
            || !is_fano(&fan)?
            || exclude.iter().any(|e| isomorphic(e, &fan))
        {
            continue;
        }
        found.push((fan, describe_cone(ambient, &cone)));
    }
    let matches: Vec<String> = found.iter().map(|(_, d)| d.clone()).collect();
    let (fan, chosen) = found.into_iter().next().ok_or_else(|| Error::NotConstructible("no blowup center matches".into()))?;
    Ok((fan, SearchOutcome { chosen, matches }))
}

/// The twist class `l` on dP8 for `P_{dP8}(O ⊕ O(l))`: classes with
/// coordinates in `[−2, 2]^2`, `l² = 1`, Fano total space with the expected
/// numbers of rays, cones and Picard rank; first in canonical order.
fn dp8_twist_search(expected: &Invariants) -> Result<(Fan, SearchOutcome), Error> {
    let base = dp8();
    let lat = PicardLattice::new(&base)?;
    let mut found: Vec<(Fan, String)> = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            let l = lat.divisor_of(&crate::divisor::PicClass::new(vec![a, b]));
            if surface_self_intersection(&base, &l)? != 1 {
                continue;
            }
            let fan = projectivize_one(&base, l.clone());
            if Some(fan.num_rays()) != expected.rays
                || Some(fan.num_max_cones()) != expected.k0
                || Some(fan.num_rays() - fan.rank()) != expected.rho
                || !is_fano(&fan)?
            {
                continue;
            }
            found.push((fan, format!("l = {:?}", l.coeffs())));
        }
    }
    let matches: Vec<String> = found.iter().map(|(_, d)| d.clone()).collect();
    let (fan, chosen) = found.into_iter().next().ok_or_else(|| Error::NotConstructible("no twist class matches".into()))?;
    Ok((fan, SearchOutcome { chosen, matches }))
}

fn fano3_fan(index: usize) -> Result<(Fan, Option<SearchOutcome>), Error> {
    let p1 = projective_space(1);
    let p2 = projective_space(2);
    let fan = match index {
        1 => projective_space(3),
        2 => projectivize_one(&p2, prime(&p2, &[1, 0]).scale(2)),
        3 => projectivize_one(&p2, prime(&p2, &[1, 0])),
        4 => p1.projectivize(&[prime(&p1, &[1]), TDivisor::zero(2)])?,
        5 => p2.product(&p1),
        6 => {
            let b = p1xp1();
            projectivize_one(&b, &prime(&b, &[1, 0]) + &prime(&b, &[0, 1]))
        }
        7 => {
            let (fan, s) = dp8_twist_search(&FANO3_TABLE[6])?;
            return Ok((fan, Some(s)));
        }
        8 => p1xp1().product(&p1),
        9 => dp8().product(&p1),
        10 => {
            let b = p1xp1();
            projectivize_one(&b, &prime(&b, &[1, 0]) - &prime(&b, &[0, 1]))
        }
        11 => {
            let exclude: Vec<Fan> =
                [6, 7, 8, 9, 10, 12].iter().map(|&r| fano3_fan(r).map(|f| f.0)).collect::<Result<_, _>>()?;
            let (fan, s) = blowup_search(&fano3_fan(3)?.0, &FANO3_TABLE[10], &exclude)?;
            return Ok((fan, Some(s)));
        }
        12 => {
            let exclude: Vec<Fan> =
                [6, 7, 8, 9, 10].iter().map(|&r| fano3_fan(r).map(|f| f.0)).collect::<Result<_, _>>()?;
            let (fan, s) = blowup_search(&p2.product(&p1), &FANO3_TABLE[11], &exclude)?;
            return Ok((fan, Some(s)));
        }
        15 => dp7().product(&p1),
        17 => dp6().product(&p1),
        13 | 14 | 16 | 18 => {
            return Err(Error::NotConstructible(format!(
                "row {index} ({}) has no fan data",
                FANO3_NAMES[index - 1]
            )))
        }
        _ => return Err(Error::UnknownName(format!("fano3-{index}"))),
    };
    Ok((fan, None))
}

/// Row `index` (1-based) of the smooth toric Fano 3-fold table.
pub fn fano3(index: usize) -> Result<CatalogEntry, Error> {
    let (fan, search) = fano3_fan(index)?;
    let mut e = CatalogEntry::new(
        format!("fano3-{index}"),
        fan,
        Some(FANO3_TABLE[index - 1]),
        FANO3_NAMES[index - 1],
    );
    e.search = search;
    Ok(e)
}

/// `c(n) = (n+1)! / ((n/2)!)²`.
pub fn vn_cone_count(n: usize) -> usize {
    let fact = |k: usize| (1..=k).product::<usize>();
    fact(n + 1) / (fact(n / 2) * fact(n / 2))
}

fn require_even(n: usize) -> Result<(), Error> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("V_n needs even n >= 2, got {n}")));
    }
    Ok(())
}

fn vn_rays(n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut e: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    e.push(vec![-1; n]);
    let ebar = e.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    (e, ebar)
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut s in subsets_of_size(&items[1..], k - 1) {
        s.insert(0, items[0]);
        out.push(s);
    }
    out.extend(subsets_of_size(&items[1..], k));
    out
}

/// The generalized del Pezzo variety `V_n` (n even): rays `±e_1, …, ±e_n,
/// ±(e_1 + … + e_n)`; a maximal cone omits one `e_i` and replaces half of
/// the remaining `e_j` by their antipodes.
pub fn v_fano(n: usize) -> Result<CatalogEntry, Error> {
    require_even(n)?;
    let (e, ebar) = vn_rays(n);
    let mut rays = e.clone();
    rays.extend(ebar);
    let m = n + 1;
    let mut cones = Vec::new();
    for omit in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&i| i != omit).collect();
        for flipped in subsets_of_size(&rest, n / 2) {
            cones.push(rest.iter().map(|&j| if flipped.contains(&j) { m + j } else { j }).collect());
        }
    }
    let fan = Fan::new(n, rays, cones).canonicalize().0;
    Ok(CatalogEntry::new(format!("V{n}"), fan, None, "centrally symmetric toric Fano variety V_n"))
}

/// Ray indices of `e_1..e_{n+1}` and `ē_1..ē_{n+1}` in the canonical `V_n` fan.
pub fn vn_ray_indices(fan: &Fan, n: usize) -> (Vec<usize>, Vec<usize>) {
    let (e, ebar) = vn_rays(n);
    let find = |v: &Vec<i64>| fan.ray_index(v).expect("V_n ray");
    (e.iter().map(find).collect(), ebar.iter().map(find).collect())
}

/// Divisors representing `H, E_1, …, E_{n+1}` on `V_n`, with `[e_i] = E_i`
/// and `[ē_i] = H − Σ_j E_j + E_i`.
pub fn vn_picard_basis(fan: &Fan, n: usize) -> Vec<TDivisor> {
    let (e, ebar) = vn_ray_indices(fan, n);
    let m = fan.num_rays();
    let mut h = TDivisor::prime(m, ebar[0]);
    for &j in &e[1..] {
        h = &h + &TDivisor::prime(m, j);
    }
    let mut basis = vec![h];
    basis.extend(e.iter().map(|&i| TDivisor::prime(m, i)));
    basis
}

/// The involution `−1` on `Pic(V_n)` in the basis `H, E_1, …, E_{n+1}`:
/// first column `(n, 1−n, …, 1−n)`, column of `E_i` equal to `H − Σ E + E_i`.
pub fn vn_involution_matrix(n: usize) -> IntMatrix {
    let n1 = n + 1;
    let mut m = IntMatrix::zeros(n1 + 1, n1 + 1);
    m[(0, 0)] = (n as i64).into();
    for i in 1..=n1 {
        m[(i, 0)] = (1 - n as i64).into();
        m[(0, i)] = 1.into();
        for j in 1..=n1 {
            m[(i, j)] = if i == j { 0.into() } else { (-1).into() };
        }
    }
    m
}

/// `S_{n+1} × C_2` acting on `V_n`: permutations of `e_1, …, e_{n+1}` (and
/// correspondingly of the `ē_i`) together with the antipodal map.
pub fn vn_symmetric_group(fan: &Fan, n: usize) -> Result<FanAutGroup, Error> {
    require_even(n)?;
    let mut gens = Vec::new();
    let bad = || Error::InvalidArgument("fan is not V_n".into());
    for i in 0..n - 1 {
        let mut m = IntMatrix::identity(n);
        m.swap_rows(i, i + 1);
        gens.push(FanAutomorphism::from_matrix(fan, m).ok_or_else(bad)?);
    }
    // e_n ↔ e_{n+1} = −Σ e_k
    let mut m = IntMatrix::identity(n);
    for r in 0..n {
        m[(r, n - 1)] = (-1).into();
    }
    gens.push(FanAutomorphism::from_matrix(fan, m).ok_or_else(bad)?);
    let mut minus = IntMatrix::identity(n);
    for r in 0..n {
        minus[(r, r)] = (-1).into();
    }
    gens.push(FanAutomorphism::from_matrix(fan, minus).ok_or_else(bad)?);
    Ok(FanAutGroup::generated_by(fan, &gens))
}

/// Label of a `V_n` collection item: `F_{c,J} = c(Σ E_i − H) − Σ_{j∈J} E_j`,
/// with `J ⊆ {1, …, n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FLabel {
    pub c: i64,
    pub j: Vec<usize>,
}

/// `F_{c,J}` as a torus-invariant divisor (`Σ E − H = D_{e_1} − D_{ē_1}`).
pub fn vn_divisor(fan: &Fan, n: usize, label: &FLabel) -> TDivisor {
    let (e, ebar) = vn_ray_indices(fan, n);
    let m = fan.num_rays();
    let mut d = (&TDivisor::prime(m, e[0]) - &TDivisor::prime(m, ebar[0])).scale(label.c);
    for &j in &label.j {
        d = &d - &TDivisor::prime(m, e[j - 1]);
    }
    d
}

/// Whether `F_{c,J}` with `|J| = size` lies in one of the two ranges:
/// `|J| − n/4 ≤ c ≤ n/4` or `(n+2)/4 ≤ c ≤ |J| − (n+2)/4`.
pub fn vn_in_range(n: usize, size: usize, c: i64) -> bool {
    let (n, s, c4) = (n as i64, size as i64, 4 * c);
    let first = 4 * s - n <= c4 && c4 <= n;
    let second = n + 2 <= c4 && c4 <= 4 * s - (n + 2);
    first || second
}

/// The `V_n` collection with its labels: blocks are orbits of
/// `S_{n+1} × C_2` (fixed `|J|`, `c` up to `c ↦ |J| − c`), ordered by
/// decreasing `|J|`, then by the smaller `c` of the orbit.
pub fn vn_collection(n: usize) -> Result<(NamedCollection, Vec<FLabel>), Error> {
    require_even(n)?;
    let fan = v_fano(n)?.fan;
    let all: Vec<usize> = (1..=n + 1).collect();
    let mut blocks: Vec<((i64, i64), Vec<FLabel>)> = Vec::new();
    for size in (0..=n + 1).rev() {
        let s = size as i64;
        let cs: Vec<i64> = (-(n as i64)..=(n as i64 + 1)).filter(|&c| vn_in_range(n, size, c)).collect();
        let mut keys: BTreeSet<i64> = BTreeSet::new();
        for &c in &cs {
            keys.insert(c.min(s - c));
        }
        for key in keys {
            let mut members = Vec::new();
            for &c in cs.iter().filter(|&&c| c.min(s - c) == key) {
                for j in subsets_of_size(&all, size) {
                    members.push(FLabel { c, j });
                }
            }
            blocks.push(((-s, key), members));
        }
    }
    let mut labels = Vec::new();
    let mut bounds = Vec::new();
    for (_, members) in blocks {
        labels.extend(members);
        bounds.push(labels.len());
    }
    let divisors = labels.iter().map(|l| vn_divisor(&fan, n, l)).collect();
    Ok((NamedCollection { name: format!("vn({n})"), fan, divisors, block_bounds: Some(bounds) }, labels))
}

/// The fan of Weyl chambers of `A_n` in the coweight lattice `ℤ^{n+1}/ℤ(1,…,1)`.
///
/// Rays are the images of indicator vectors of nonempty proper subsets of
/// `{1, …, n+1}`; chambers correspond to complete flags of subsets.
/// Coordinates: `x ↦ (x_1 − x_{n+1}, …, x_n − x_{n+1})`.
pub fn weyl_a(n: usize) -> Result<Fan, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    if n > 6 {
        return Err(Error::InvalidArgument("A_n fans are limited to n <= 6".into()));
    }
    let m = n + 1;
    let coords = |mask: u32| -> Vec<i64> {
        let last = i64::from(mask >> n & 1);
        (0..n).map(|i| i64::from(mask >> i & 1) - last).collect()
    };
    let masks: Vec<u32> = (1..(1u32 << m) - 1).collect();
    let rays: Vec<Vec<i64>> = masks.iter().map(|&s| coords(s)).collect();
    let index_of = |mask: u32| masks.iter().position(|&s| s == mask).expect("proper subset");
    let mut cones = Vec::new();
    for perm in crate::symmetry::permutations(&(0..m).collect::<Vec<_>>()) {
        let mut mask = 0u32;
        let mut cone = Vec::with_capacity(n);
        for &i in &perm[..n] {
            mask |= 1 << i;
            cone.push(index_of(mask));
        }
        cones.push(cone);
    }
    Ok(Fan::new(n, rays, cones).canonicalize().0)
}

/// Computes `(σ(1), k_0, |Aut(Σ)|, ρ, ρ^G, 𝔣𝔯, 𝔣𝔯⁻)` for a smooth complete fan.
pub fn compute_invariants(fan: &Fan) -> Result<Invariants, Error> {
    let lat = PicardLattice::new(fan)?;
    let group = fan_automorphisms(fan);
    let action = pic_action(&group, &lat)?;
    let fr = frob_set(fan, &lat)?.len();
    let fr_minus = frob_antinef(fan, &lat)?.len();
    Ok(Invariants::row(
        fan.num_rays(),
        fan.num_max_cones(),
        group.order(),
        lat.rank(),
        action.invariant_rank(),
        fr,
        fr_minus,
    ))
}

/// A named collection: divisors on a fan with optional block bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCollection {
    pub name: String,
    pub fan: Fan,
    pub divisors: Vec<TDivisor>,
    pub block_bounds: Option<Vec<usize>>,
}

impl NamedCollection {
    pub fn collection(&self, lat: &PicardLattice) -> Result<Collection, Error> {
        let items = self.divisors.iter().map(|d| lat.class_of(d)).collect::<Result<Vec<_>, _>>()?;
        match &self.block_bounds {
            Some(b) => Collection::with_blocks(items, b.clone()),
            None => Collection::new(items),
        }
    }
}

/// `O, O(1), …, O(n)` on `P^n`.
pub fn beilinson(n: usize) -> NamedCollection {
    let fan = projective_space(n);
    let h = TDivisor::prime(n + 1, 0);
    let divisors = (0..=n as i64).map(|k| h.scale(k)).collect();
    NamedCollection { name: format!("beilinson(P{n})"), fan, divisors, block_bounds: None }
}

pub fn p1xp1_collection() -> NamedCollection {
    let fan = p1xp1();
    let (a, b) = (prime(&fan, &[1, 0]), prime(&fan, &[0, 1]));
    let divisors = vec![TDivisor::zero(4), a.clone(), b.clone(), &a + &b];
    NamedCollection { name: "p1p1".into(), fan, divisors, block_bounds: Some(vec![1, 3, 4]) }
}

/// `O, O(D_3), O(D_4), O(D_3 + D_4)` on `F_a`, with `u_3 = e_1`, `u_4 = −e_2`.
pub fn hirzebruch_collection(a: i64) -> NamedCollection {
    let fan = hirzebruch(a);
    let (d3, d4) = (prime(&fan, &[1, 0]), prime(&fan, &[0, -1]));
    let divisors = vec![TDivisor::zero(4), d3.clone(), d4.clone(), &d3 + &d4];
    NamedCollection { name: format!("hirzebruch(F{a})"), fan, divisors, block_bounds: None }
}

/// `O, O(H−E_1), O(H−E_2), O(H−E_3), O(H), O(2H − E_1 − E_2 − E_3)` on dP6.
pub fn king_dp6() -> NamedCollection {
    let (fan, h, e) = dp6_blowup_basis();
    let mut divisors = vec![TDivisor::zero(6)];
    divisors.extend(e.iter().map(|ei| &h - ei));
    divisors.push(h.clone());
    divisors.push(&(&(&h.scale(2) - &e[0]) - &e[1]) - &e[2]);
    NamedCollection { name: "king(dP6)".into(), fan, divisors, block_bounds: Some(vec![1, 4, 6]) }
}

/// Exterior products `a ⊠ b`, ordered lexicographically (first factor major).
pub fn product_collection(a: &NamedCollection, b: &NamedCollection) -> NamedCollection {
    let (fan, left, right) = a.fan.product_with_embeddings(&b.fan);
    let m = fan.num_rays();
    let mut divisors = Vec::new();
    for da in &a.divisors {
        for db in &b.divisors {
            let mut c = vec![0; m];
            for (i, &x) in da.coeffs().iter().enumerate() {
                c[left[i]] += x;
            }
            for (i, &x) in db.coeffs().iter().enumerate() {
                c[right[i]] += x;
            }
            divisors.push(TDivisor::new(c));
        }
    }
    NamedCollection { name: format!("{} x {}", a.name, b.name), fan, divisors, block_bounds: None }
}

/// Frobenius classes in the anti-nef cone, ordered so that no backward Ext survives.
pub fn bondal_uehara(fan: &Fan) -> Result<NamedCollection, Error> {
    let lat = PicardLattice::new(fan)?;
    let classes = frob_antinef(fan, &lat)?;
    let order = Verifier::new(fan)?.order_by_ext(&classes)?;
    let divisors = order.iter().map(|c| lat.divisor_of(c)).collect();
    Ok(NamedCollection { name: "bondal-uehara".into(), fan: fan.clone(), divisors, block_bounds: None })
}

/// Resolves a catalog name: `P<n>`, `P1xP1`, `F<a>`, `dP6`, `dP7`, `dP8`,
/// `fano3-<k>`, `V<n>`, `A<n>`.
pub fn by_name(name: &str) -> Result<CatalogEntry, Error> {
    let unknown = || Error::UnknownName(name.to_string());
    if let Ok(e) = surface(name) {
        return Ok(e);
    }
    if let Some(k) = name.strip_prefix("fano3-") {
        return fano3(k.parse().map_err(|_| unknown())?);
    }
    if let Some(k) = name.strip_prefix('V') {
        return v_fano(k.parse().map_err(|_| unknown())?);
    }
    if let Some(k) = name.strip_prefix('A') {
        let n: usize = k.parse().map_err(|_| unknown())?;
        return Ok(CatalogEntry::new(name, weyl_a(n)?, None, "fan of Weyl chambers of type A"));
    }
    if let Some(k) = name.strip_prefix('P') {
        let n: usize = k.parse().map_err(|_| unknown())?;
        if n == 0 || n > 8 {
            return Err(unknown());
        }
        return Ok(CatalogEntry::new(name, projective_space(n), None, "projective space"));
    }
    Err(unknown())
}

/// Resolves a collection name on a named variety.
pub fn collection_by_name(target: &str, name: &str) -> Result<NamedCollection, Error> {
    let fan = by_name(target)?.fan;
    let projective_dim = || -> Option<usize> {
        let n: usize = target.strip_prefix('P')?.parse().ok()?;
        Some(n)
    };
    let coll = match name {
        "beilinson" | "beilinson-reversed" => {
            let n = projective_dim().ok_or_else(|| Error::InvalidArgument(format!("{name} needs P<n>")))?;
            let mut c = beilinson(n);
            if name == "beilinson-reversed" {
                c.divisors.reverse();
                c.name = format!("beilinson-reversed(P{n})");
            }
            c
        }
        "king" if target == "dP6" => king_dp6(),
        "p1p1" if target == "P1xP1" => p1xp1_collection(),
        "hirzebruch" => {
            let a: i64 = target
                .strip_prefix('F')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidArgument("hirzebruch needs F<a>".into()))?;
            hirzebruch_collection(a)
        }
        "vn" => {
            let n: usize = target
                .strip_prefix('V')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidArgument("vn needs V<n>".into()))?;
            vn_collection(n)?.0
        }
        "bondal-uehara" => bondal_uehara(&fan)?,
        _ => return Err(Error::UnknownName(format!("{name} on {target}"))),
    };
    Ok(coll)
}
