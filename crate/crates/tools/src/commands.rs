//! Subcommand implementations. Each returns a JSON report, a text rendering
//! derived from it, and whether every requested check passed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use toric_core::catalog::{self, CatalogEntry, Invariants, FANO3_NAMES, FANO3_TABLE};
use toric_core::collections::{ExtFailure, Verifier};
use toric_core::divisor::{is_fano, CurveDegrees};
use toric_core::frobenius::{frob_set, frob_sweep};
use toric_core::symmetry::{fan_automorphisms, FanAutGroup, PicAction};
use toric_core::{Error, Fan, PicardLattice};

use crate::format::{read_json, to_line, to_pretty, CollectionJson, FanJson, GroupJson};
use crate::ToolError;

pub struct Report {
    pub json: String,
    pub text: String,
    pub passed: bool,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String, passed: bool) -> Self {
        Report { json: to_pretty(value), text, passed }
    }
}

/// A catalog name or a fan file.
#[derive(Clone, Debug)]
pub enum Target {
    Name(String),
    File(PathBuf),
}

impl Target {
    pub fn from_args(name: Option<String>, file: Option<PathBuf>) -> Result<Self, ToolError> {
        match (name, file) {
            (Some(n), None) => Ok(Target::Name(n)),
            (None, Some(f)) => Ok(Target::File(f)),
            (Some(_), Some(_)) => Err(ToolError::Input("give either a target name or --fan, not both".into())),
            (None, None) => Err(ToolError::Input("a target name or --fan FILE is required".into())),
        }
    }

    fn resolve(&self) -> Result<(Option<CatalogEntry>, Fan), ToolError> {
        match self {
            Target::Name(n) => {
                let e = catalog::by_name(n)?;
                let fan = e.fan.clone();
                Ok((Some(e), fan))
            }
            Target::File(p) => Ok((None, read_json::<FanJson>(p)?.into_fan()?)),
        }
    }
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

#[derive(Serialize)]
struct DescribeJson {
    rank: usize,
    rays: usize,
    max_cones: usize,
    smooth: bool,
    complete: bool,
    fano: Option<bool>,
    picard_rank: Option<usize>,
    aut_order: Option<usize>,
    invariant_picard_rank: Option<usize>,
}

pub fn describe(target: &Target) -> Result<Report, ToolError> {
    let (entry, fan) = target.resolve()?;
    let smooth = fan.is_smooth();
    let complete = fan.is_complete();
    let mut d = DescribeJson {
        rank: fan.rank(),
        rays: fan.num_rays(),
        max_cones: fan.num_max_cones(),
        smooth,
        complete,
        fano: None,
        picard_rank: None,
        aut_order: None,
        invariant_picard_rank: None,
    };
    if smooth && complete {
        let lat = PicardLattice::new(&fan)?;
        let group = fan_automorphisms(&fan);
        let action = PicAction::new(group.clone(), &lat)?;
        d.fano = Some(is_fano(&fan)?);
        d.picard_rank = Some(lat.rank());
        d.aut_order = Some(group.order());
        d.invariant_picard_rank = Some(action.invariant_rank());
    }
    let mut text = String::new();
    if let Some(e) = &entry {
        writeln!(text, "{} ({})", e.name, e.provenance).unwrap();
    }
    writeln!(text, "rank            {}", d.rank).unwrap();
    writeln!(text, "rays            {}", d.rays).unwrap();
    writeln!(text, "maximal cones   {}", d.max_cones).unwrap();
    writeln!(text, "smooth          {}", d.smooth).unwrap();
    writeln!(text, "complete        {}", d.complete).unwrap();
    writeln!(text, "Fano            {}", opt(&d.fano)).unwrap();
    writeln!(text, "Picard rank     {}", opt(&d.picard_rank)).unwrap();
    writeln!(text, "|Aut|           {}", opt(&d.aut_order)).unwrap();
    writeln!(text, "invariant rank  {}", opt(&d.invariant_picard_rank)).unwrap();
    if let Some(exp) = entry.as_ref().and_then(|e| e.expected) {
        writeln!(text, "expected        {}", render_invariants(&exp)).unwrap();
    }
    if let Some(s) = entry.as_ref().and_then(|e| e.search.as_ref()) {
        writeln!(text, "search chose    {} among {} candidates", s.chosen, s.matches.len()).unwrap();
    }
    Ok(Report::new(&d, text, true))
}

fn render_invariants(inv: &Invariants) -> String {
    let cells: Vec<String> = inv.as_array().iter().map(opt).collect();
    format!("({})", cells.join(", "))
}

#[derive(Serialize)]
struct Table1Row {
    row: usize,
    name: &'static str,
    status: &'static str,
    computed: Option<[usize; 7]>,
    expected: [usize; 7],
}

#[derive(Serialize)]
struct Table1Json {
    columns: [&'static str; 7],
    rows: Vec<Table1Row>,
    passed: bool,
}

const COLUMNS: [&str; 7] = ["rays", "k0", "aut", "rho", "rho_G", "fr", "fr_minus"];

fn as_row(inv: &Invariants) -> [usize; 7] {
    inv.as_array().map(|x| x.unwrap_or(0))
}

pub fn table1() -> Result<Report, ToolError> {
    let mut rows = Vec::new();
    for row in 1..=18 {
        let expected = as_row(&FANO3_TABLE[row - 1]);
        let (status, computed) = match catalog::fano3(row) {
            Ok(e) => {
                let got = as_row(&catalog::compute_invariants(&e.fan)?);
                (if got == expected { "PASS" } else { "FAIL" }, Some(got))
            }
            Err(Error::NotConstructible(_)) => ("SKIPPED", None),
            Err(e) => return Err(e.into()),
        };
        rows.push(Table1Row { row, name: FANO3_NAMES[row - 1], status, computed, expected });
    }
    let passed = rows.iter().all(|r| r.status != "FAIL");
    let mut text = String::new();
    writeln!(text, "{:>3}  {:<28} {:<28} {:<28} status", "row", "variety", "computed", "expected").unwrap();
    for r in &rows {
        let computed = r.computed.map_or_else(|| "-".to_string(), |c| format!("{c:?}"));
        writeln!(text, "{:>3}  {:<28} {:<28} {:<28} {}", r.row, r.name, computed, format!("{:?}", r.expected), r.status)
            .unwrap();
    }
    writeln!(text, "columns: {}", COLUMNS.join(", ")).unwrap();
    Ok(Report::new(&Table1Json { columns: COLUMNS, rows, passed }, text, passed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FrobMethod {
    Exact,
    Sweep,
}

#[derive(Serialize)]
struct FrobClass {
    class: Vec<i64>,
    divisor: Vec<i64>,
    antinef: bool,
}

#[derive(Serialize)]
struct FrobJson {
    method: &'static str,
    max_level: Option<u32>,
    count: usize,
    antinef_count: usize,
    classes: Vec<FrobClass>,
}

pub fn frobenius(target: &Target, method: FrobMethod, lmax: u32) -> Result<Report, ToolError> {
    let (_, fan) = target.resolve()?;
    let lat = PicardLattice::new(&fan)?;
    let set = match method {
        FrobMethod::Exact => frob_set(&fan, &lat)?,
        FrobMethod::Sweep => frob_sweep(&fan, &lat, lmax)?,
    };
    let curves = CurveDegrees::new(&fan)?;
    let classes: Vec<FrobClass> = set
        .classes
        .iter()
        .map(|c| {
            let d = lat.divisor_of(c);
            FrobClass { class: c.coords().to_vec(), antinef: curves.is_nef(&-&d), divisor: d.coeffs().to_vec() }
        })
        .collect();
    let report = FrobJson {
        method: if method == FrobMethod::Exact { "exact" } else { "sweep" },
        max_level: (method == FrobMethod::Sweep).then_some(lmax),
        count: classes.len(),
        antinef_count: classes.iter().filter(|c| c.antinef).count(),
        classes,
    };
    let mut text = String::new();
    writeln!(text, "{} classes, {} anti-nef ({} method)", report.count, report.antinef_count, report.method).unwrap();
    for c in &report.classes {
        writeln!(text, "  {:?}  divisor {:?}{}", c.class, c.divisor, if c.antinef { "  anti-nef" } else { "" }).unwrap();
    }
    Ok(Report::new(&report, text, true))
}

/// `full`, `none`, or a group JSON file.
#[derive(Clone, Debug)]
pub enum GroupChoice {
    Full,
    None,
    File(PathBuf),
}

impl std::str::FromStr for GroupChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "full" => GroupChoice::Full,
            "none" => GroupChoice::None,
            path => GroupChoice::File(PathBuf::from(path)),
        })
    }
}

#[derive(Serialize)]
struct WitnessJson {
    kind: &'static str,
    i: usize,
    j: usize,
    degree: usize,
    dim: u64,
}

#[derive(Serialize)]
struct CheckJson {
    collection: String,
    length: usize,
    k0: usize,
    length_matches_k0: bool,
    exceptional: bool,
    strong: Option<bool>,
    group_order: Option<usize>,
    stable: Option<bool>,
    blocks: Option<Vec<Vec<usize>>>,
    block_sizes: Option<Vec<usize>>,
    declared_block_defects: Vec<usize>,
    failures: Vec<WitnessJson>,
    unstable_items: Vec<[usize; 2]>,
    passed: bool,
}

fn looks_like_file(s: &str) -> bool {
    s.ends_with(".json") || s.contains('/') || Path::new(s).is_file()
}

pub fn check(target: &Target, collection: &str, group: &GroupChoice, strong: bool) -> Result<Report, ToolError> {
    let (fan, named) = if looks_like_file(collection) {
        let (_, fan) = target.resolve()?;
        (fan, read_json::<CollectionJson>(Path::new(collection))?)
    } else {
        let Target::Name(name) = target else {
            return Err(ToolError::Input("named collections need a catalog target".into()));
        };
        let nc = catalog::collection_by_name(name, collection)?;
        let json = CollectionJson::from_divisors(&nc.divisors, nc.block_bounds.clone());
        (nc.fan, json)
    };
    let lat = PicardLattice::new(&fan)?;
    let coll = named.to_collection(&lat)?;
    let group = match group {
        GroupChoice::Full => Some(fan_automorphisms(&fan)),
        GroupChoice::None => None,
        GroupChoice::File(p) => Some(read_json::<GroupJson>(p)?.into_group(&fan)?),
    };
    let action = group.clone().map(|g| PicAction::new(g, &lat)).transpose()?;
    let mut verifier = Verifier::new(&fan)?;
    let r = verifier.check(&coll, action.as_ref(), strong)?;
    let declared_block_defects = verifier.declared_block_defects(&coll)?;
    let passed = r.passed() && declared_block_defects.is_empty();
    let report = CheckJson {
        collection: collection.to_string(),
        length: r.length,
        k0: r.k0,
        length_matches_k0: r.length_matches_k0(),
        exceptional: r.exceptional,
        strong: r.strong,
        group_order: group.as_ref().map(FanAutGroup::order),
        stable: r.stable,
        block_sizes: r.blocks.as_ref().map(|b| b.sizes()),
        blocks: r.blocks.map(|b| b.blocks),
        declared_block_defects,
        failures: r
            .failures
            .iter()
            .map(|w| WitnessJson {
                kind: match w.kind {
                    ExtFailure::NotExceptionalObject => "not-exceptional-object",
                    ExtFailure::Backward => "backward",
                    ExtFailure::HigherForward => "higher-forward",
                },
                i: w.i,
                j: w.j,
                degree: w.degree,
                dim: w.dim,
            })
            .collect(),
        unstable_items: r.unstable_items.iter().map(|&(i, g)| [i, g]).collect(),
        passed,
    };
    Ok(Report::new(&report, check_text(&report), passed))
}

fn check_text(r: &CheckJson) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut t = String::new();
    writeln!(t, "{}: {}", r.collection, if r.passed { "PASS" } else { "FAIL" }).unwrap();
    writeln!(t, "  exceptional     {}", yes(r.exceptional)).unwrap();
    if let Some(s) = r.strong {
        writeln!(t, "  strong          {}", yes(s)).unwrap();
    }
    if let (Some(s), Some(order)) = (r.stable, r.group_order) {
        writeln!(t, "  stable          {} (group of order {order})", yes(s)).unwrap();
    }
    if let Some(sizes) = &r.block_sizes {
        let sizes: Vec<String> = sizes.iter().map(ToString::to_string).collect();
        writeln!(t, "  blocks          ({})", sizes.join(",")).unwrap();
    }
    writeln!(t, "  length = k0     {} = {} {}", r.length, r.k0, yes(r.length_matches_k0)).unwrap();
    for b in &r.declared_block_defects {
        writeln!(t, "  declared block {b} is not completely orthogonal").unwrap();
    }
    for w in &r.failures {
        writeln!(t, "  {} Ext^{}(E_{}, E_{}) has dimension {}", w.kind, w.degree, w.i, w.j, w.dim).unwrap();
    }
    for [i, g] in &r.unstable_items {
        writeln!(t, "  group element {g} moves item {i} out of the collection").unwrap();
    }
    t
}

pub fn group(target: &Target, vn_symmetric: bool) -> Result<Report, ToolError> {
    let (_, fan) = target.resolve()?;
    let group = if vn_symmetric {
        let n = match target {
            Target::Name(name) => name.strip_prefix('V').and_then(|k| k.parse().ok()),
            Target::File(_) => None,
        }
        .ok_or_else(|| ToolError::Input("--vn-symmetric needs a V<n> target".into()))?;
        catalog::vn_symmetric_group(&fan, n)?
    } else {
        fan_automorphisms(&fan)
    };
    let json = GroupJson::from_group(&group);
    let mut text = String::new();
    writeln!(text, "order {}, {}", json.order, if json.abelian { "abelian" } else { "non-abelian" }).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for o in &json.element_orders {
        *counts.entry(*o).or_insert(0usize) += 1;
    }
    for (o, n) in counts {
        writeln!(text, "  {n} elements of order {o}").unwrap();
    }
    Ok(Report::new(&json, text, true))
}

#[derive(Serialize)]
struct EntryJson {
    name: String,
    provenance: &'static str,
    fan: FanJson,
    expected: Option<[Option<usize>; 7]>,
    columns: [&'static str; 7],
}

pub enum ExportWhat {
    Fan,
    Entry,
    Collection(String),
}

/// Export output is always JSON: the fan (single line), the catalog entry
/// with its expected invariants, or a named collection.
pub fn export(name: &str, what: &ExportWhat) -> Result<String, ToolError> {
    Ok(match what {
        ExportWhat::Fan => to_line(&FanJson::from_fan(&catalog::by_name(name)?.fan)),
        ExportWhat::Entry => {
            let e = catalog::by_name(name)?;
            to_pretty(&EntryJson {
                name: e.name,
                provenance: e.provenance,
                fan: FanJson::from_fan(&e.fan),
                expected: e.expected.map(|x| x.as_array()),
                columns: COLUMNS,
            })
        }
        ExportWhat::Collection(c) => {
            let nc = catalog::collection_by_name(name, c)?;
            to_line(&CollectionJson::from_divisors(&nc.divisors, nc.block_bounds))
        }
    })
}

