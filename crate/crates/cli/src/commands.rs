use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use rootdatum::oracle::Window;
use rootdatum::polytope::{order_criteria_agree, quantized_cover_check_with_form, CoverVerdict, OrderCriteria};
use rootdatum::root_datum::root_data_isomorphic;
use rootdatum::{
    materialize_oracle, recover_datum, CharEngine, OracleTable, ReconstructionReport, RootDatum, RootDatumData,
    Weight,
};

use crate::config::Config;
use crate::{Failure, Output};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &str, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

/// `path:line:column: message`, without serde's trailing position.
fn json_error(path: &Path, e: &serde_json::Error) -> Failure {
    let msg = e.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg);
    Failure::Input(format!("{}:{}:{}: {msg}", path.display(), e.line(), e.column()))
}

fn load_datum(cfg: &Config, spec: &str) -> Result<RootDatum, Failure> {
    let path = cfg.resolve(spec);
    let text = read(&path)?;
    let data: RootDatumData = serde_json::from_str(&text).map_err(|e| json_error(&path, &e))?;
    RootDatum::new(data).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn datum_name(d: &RootDatum, spec: &str) -> String {
    d.name().map_or_else(|| spec.to_string(), str::to_string)
}

fn parse_weight(d: &RootDatum, what: &str, s: &str) -> Result<Weight, Failure> {
    let w: Weight = s
        .parse()
        .map_err(|e| Failure::Input(format!("--{what} {s:?}: {e}")))?;
    if w.rank() != d.rank() {
        return Err(Failure::Input(format!(
            "--{what} {s:?} has {} coordinates, the datum has rank {}",
            w.rank(),
            d.rank()
        )));
    }
    Ok(w)
}

pub fn gen_oracle(cfg: &Config, datum: &str, out: Option<&str>, provenance: Option<&str>) -> Result<Output, Failure> {
    let d = load_datum(cfg, datum)?;
    let m = materialize_oracle(&d, cfg.bound, cfg.seed)?;
    let text = m.table.to_text();
    if let Some(p) = provenance {
        let json = serde_json::to_string_pretty(&m.provenance_map()).expect("weights serialize") + "\n";
        write(p, &json)?;
    }
    let Some(out) = out else {
        return Ok(Output { text, passed: true });
    };
    write(out, &text)?;
    let total = m.table.products().count();
    let known = m.table.products().filter(|(_, p)| p.known().is_some()).count();
    Ok(Output {
        text: format!(
            "{}: {} labels, {known} of {total} products in window (bound {}, seed {})\n",
            datum_name(&d, datum),
            m.table.len(),
            cfg.bound,
            cfg.seed
        ),
        passed: true,
    })
}

fn summary(r: &ReconstructionReport) -> String {
    let mut s = String::new();
    writeln!(s, "labels: {}", r.labels).unwrap();
    match r.failed_stage() {
        None => {
            let d = r.root_datum().expect("certified reports carry a datum");
            writeln!(s, "verdict: certified").unwrap();
            writeln!(s, "rank: {}", d.rank()).unwrap();
            writeln!(s, "semisimple rank: {}", d.semisimple_rank()).unwrap();
            writeln!(s, "weyl group order: {}", r.weyl_order.unwrap_or(0)).unwrap();
            writeln!(s, "placed from the window shape: {}", r.placed_by_window.len()).unwrap();
            writeln!(s, "sums fixed by search: {}", r.assumed_sums.len()).unwrap();
        }
        Some(stage) => {
            let rootdatum::reconstruction::Verdict::Failed { reason, .. } = &r.verdict else {
                unreachable!()
            };
            writeln!(s, "verdict: failed at {stage}: {reason}").unwrap();
        }
    }
    s
}

pub fn reconstruct(cfg: &Config, oracle: &str, out: Option<&str>) -> Result<Output, Failure> {
    let path = Path::new(oracle);
    let text = read(path)?;
    let t = OracleTable::parse(&text, oracle)?;
    let report = recover_datum(&t, &cfg.params());
    let passed = report.is_certified();
    let text = match out {
        Some(out) => {
            write(out, &report.to_json())?;
            summary(&report)
        }
        None => report.to_json(),
    };
    Ok(Output { text, passed })
}

pub fn verify(cfg: &Config, datum: &str, report: &str) -> Result<Output, Failure> {
    let d = load_datum(cfg, datum)?;
    let path = Path::new(report);
    let r: ReconstructionReport = serde_json::from_str(&read(path)?).map_err(|e| json_error(path, &e))?;
    let name = datum_name(&d, datum);
    if let rootdatum::reconstruction::Verdict::Failed { stage, reason } = &r.verdict {
        return Err(Failure::Rejected(format!("not certified: failed at {stage}: {reason}")));
    }
    let Some(rec) = r.root_datum() else {
        return Err(Failure::Rejected("certified report holds no valid datum".into()));
    };
    match root_data_isomorphic(&d, &rec) {
        Some(_) => Ok(Output {
            text: format!("certified and isomorphic to {name}\n"),
            passed: true,
        }),
        None => Err(Failure::Rejected(format!("certified, but not isomorphic to {name}"))),
    }
}

pub fn tensor(cfg: &Config, datum: &str, left: &str, right: &str, lines: bool) -> Result<Output, Failure> {
    let d = load_datum(cfg, datum)?;
    let (l, r) = (parse_weight(&d, "left", left)?, parse_weight(&d, "right", right)?);
    let engine = CharEngine::new(&d)?;
    let e = engine.tensor_decompose(&l, &r)?;
    let text = if lines { e.to_lines() } else { format!("{e}\n") };
    Ok(Output { text, passed: true })
}

/// Sets whose covering is checked: the W-orbits of the dominant monoid
/// generators, or of the coordinate vectors when there is a central torus.
fn cover_sets(engine: &CharEngine) -> Result<Vec<(Weight, Vec<Weight>)>, Failure> {
    let d = engine.datum();
    let gens = match engine.dominant_generators() {
        Ok(g) => g,
        Err(rootdatum::Error::NotSemisimple(_)) => {
            let mut g: Vec<Weight> = (0..d.rank())
                .map(|i| d.dominant_representative(&Weight::unit(d.rank(), i)))
                .collect();
            g.sort();
            g.dedup();
            g
        }
        Err(e) => return Err(e.into()),
    };
    Ok(gens
        .into_iter()
        .map(|g| {
            let orbit = d.orbit(&g).into_iter().collect();
            (g, orbit)
        })
        .collect())
}

fn tally(rows: &[OrderCriteria], given: impl Fn(&OrderCriteria) -> bool, holds: impl Fn(&OrderCriteria) -> bool) -> (usize, usize) {
    let checked: Vec<_> = rows.iter().filter(|c| given(c)).collect();
    (checked.len(), checked.iter().filter(|c| !holds(c)).count())
}

pub fn check_props(cfg: &Config, datum: &str, max_coord: u64, cover_n: usize) -> Result<Output, Failure> {
    let d = load_datum(cfg, datum)?;
    let engine = CharEngine::new(&d)?;
    let weights = Window::new(&d).enumerate(&d, max_coord);
    let pairs: Vec<(&Weight, &Weight)> = weights
        .iter()
        .flat_map(|mu| weights.iter().map(move |l| (mu, l)))
        .filter(|(mu, l)| d.same_root_coset(mu, l))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|(mu, l)| order_criteria_agree(&engine, mu, l, cfg.n_max))
        .collect::<rootdatum::Result<Vec<_>>>()?;

    let mut s = String::new();
    let mut passed = true;
    writeln!(s, "datum: {}", datum_name(&d, datum)).unwrap();
    writeln!(s, "dominant weights with window coordinates <= {max_coord}: {}", weights.len()).unwrap();
    writeln!(s, "ordered pairs in a common root coset: {}", pairs.len()).unwrap();
    writeln!(s, "tensor powers: n <= {}", cfg.n_max).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "{:<14} {:>8} {:>9}", "criterion", "checked", "failures").unwrap();
    let lines = [
        ("(a) <=> (b)", tally(&rows, |_| true, |c| c.dominance == c.hull)),
        ("(a) => (c)", tally(&rows, |c| c.dominance, |c| c.tensor)),
        ("(c) => (a)", tally(&rows, |c| c.tensor, |c| c.dominance)),
    ];
    for (name, (checked, failures)) in lines {
        passed &= failures == 0;
        writeln!(s, "{name:<14} {checked:>8} {failures:>9}").unwrap();
    }

    writeln!(s).unwrap();
    writeln!(s, "{:<24} {:>2} {:>7} {:>6} {:>6}  verdict", "covering set", "n", "points", "R^2", "worst").unwrap();
    let gram = d.invariant_form();
    for (g, orbit) in cover_sets(&engine)? {
        for n in 1..=cover_n {
            let r = quantized_cover_check_with_form(&orbit, n, &gram, cfg.point_budget)?;
            let verdict = match &r.verdict {
                CoverVerdict::Covered => "covered".to_string(),
                CoverVerdict::Uncovered { point } => {
                    passed = false;
                    format!("UNCOVERED at ({point})")
                }
                CoverVerdict::Skipped { box_points } => format!("skipped ({box_points} box points)"),
            };
            writeln!(
                s,
                "{:<24} {n:>2} {:>7} {:>6} {:>6}  {verdict}",
                format!("W({g}), {} points", orbit.len()),
                r.points,
                r.r_squared,
                r.worst_residual
            )
            .unwrap();
        }
    }
    writeln!(s).unwrap();
    writeln!(s, "result: {}", if passed { "pass" } else { "FAIL" }).unwrap();
    Ok(Output { text: s, passed })
}
