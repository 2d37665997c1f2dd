//! Acceptance criteria 1–10. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any does.

use std::io::Write;
use std::time::{Duration, Instant};

use grassblow::exactpoly::MultiPoly;
use grassblow::grassmann::Params;
use grassblow::millecrepes::{gamma_tau_symbolic, ChartIndex};
use grassblow::par::Strategy;
use grassblow::suites::{self, all_pass, CheckRecord, SampleConfig};

const SEED: u64 = 20_240_601;

fn params(s: usize, p: usize, n: usize) -> Params {
    Params::new(s, p, n).unwrap()
}

fn cfg(samples: usize) -> SampleConfig {
    SampleConfig { samples, seed: SEED, strategy: Strategy::Parallel }
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_records(records: Vec<CheckRecord>) -> Outcome {
    let failed: Vec<&CheckRecord> = records.iter().filter(|r| !r.pass).collect();
    let detail = match failed.first() {
        None => format!("{} checks", records.len()),
        Some(r) => format!(
            "{}/{} checks failed; first: [{}] {} {} {}",
            failed.len(),
            records.len(),
            r.params.as_deref().unwrap_or("-"),
            r.check,
            r.anchor,
            r.witness
        ),
    };
    Outcome { pass: all_pass(&records), detail }
}

fn parse_matrix(rows: &[&[&str]]) -> Vec<Vec<MultiPoly>> {
    rows.iter().map(|r| r.iter().map(|e| e.parse().unwrap()).collect()).collect()
}

fn criterion_1() -> Outcome {
    let g36 = gamma_tau_symbolic(
        &params(3, 3, 6),
        &ChartIndex::new(&params(3, 3, 6), 3, vec![1, 2, 3], vec![1, 2, 3]).unwrap(),
    );
    let e36 = parse_matrix(&[
        &["a[1,1]", "a[1,1]*xi[1;1,2]", "a[1,1]*xi[1;1,3]", "1", "0", "0"],
        &[
            "a[1,1]*xi[1;2,1]",
            "a[1,1]*(xi[1;2,1]*xi[1;1,2] + a[2,2])",
            "a[1,1]*(xi[1;2,1]*xi[1;1,3] + a[2,2]*xi[2;2,3])",
            "0",
            "1",
            "0",
        ],
        &[
            "a[1,1]*xi[1;3,1]",
            "a[1,1]*(xi[1;3,1]*xi[1;1,2] + a[2,2]*xi[2;3,2])",
            "a[1,1]*(xi[1;3,1]*xi[1;1,3] + a[2,2]*(xi[2;3,2]*xi[2;2,3] + a[3,3]))",
            "0",
            "0",
            "1",
        ],
    ]);
    let par48 = params(4, 4, 8);
    let g48 = gamma_tau_symbolic(&par48, &ChartIndex::new(&par48, 2, vec![3, 4, 1, 2], vec![7, 8, 1, 2]).unwrap());
    let e48 = parse_matrix(&[
        &["a[1,1]", "a[1,1]*xi[3;1,2]", "0", "0", "1", "0", "x[1,7]", "x[1,8]"],
        &["a[1,1]*xi[3;2,1]", "a[1,1]*(xi[3;1,2]*xi[3;2,1] + a[2,2])", "0", "0", "0", "1", "x[2,7]", "x[2,8]"],
        &["y[3,1]", "y[3,2]", "1", "0", "0", "0", "b[3,7]", "b[3,7]*xi[1;3,8]"],
        &["y[4,1]", "y[4,2]", "0", "1", "0", "0", "b[3,7]*xi[1;4,7]", "b[3,7]*(xi[1;4,7]*xi[1;3,8] + b[4,8])"],
    ]);
    let ok36 = g36 == e36;
    let ok48 = g48 == e48;
    Outcome { pass: ok36 && ok48, detail: format!("G(3,6) {ok36}, G(4,8) {ok48}") }
}

fn criterion_2() -> Outcome {
    let recs = [params(2, 2, 4), params(3, 3, 6), params(3, 2, 5)]
        .iter()
        .flat_map(|p| suites::check_lemma_em(p, Strategy::Parallel))
        .collect();
    from_records(recs)
}

fn criterion_3() -> Outcome {
    let recs = [params(2, 2, 4), params(3, 2, 5), params(4, 3, 6)]
        .iter()
        .flat_map(|p| suites::check_round_trip(p, &cfg(200)))
        .collect();
    from_records(recs)
}

fn criterion_4() -> Outcome {
    from_records((1..=3).flat_map(|r| suites::check_orbits(r, SEED, Strategy::Parallel)).collect())
}

fn criterion_5() -> Outcome {
    let recs = [params(2, 2, 4), params(3, 2, 5), params(4, 3, 6)]
        .iter()
        .flat_map(|p| suites::check_flow(p, &cfg(100)))
        .filter(|r| r.anchor == suites::ANCHOR_DEGREE)
        .collect();
    from_records(recs)
}

fn criterion_6() -> Outcome {
    let recs = [params(2, 2, 4), params(3, 2, 5), params(4, 3, 6)]
        .iter()
        .flat_map(|p| suites::check_retraction(p, &cfg(100)))
        .collect();
    from_records(recs)
}

fn criterion_7() -> Outcome {
    from_records(
        [(1, 2), (2, 4), (2, 5), (3, 6)].iter().flat_map(|&(p, n)| suites::check_diagram(p, n, &cfg(100))).collect(),
    )
}

fn criterion_8() -> Outcome {
    let mut recs: Vec<CheckRecord> = [params(2, 2, 4), params(3, 2, 5), params(4, 3, 6), params(3, 3, 6)]
        .iter()
        .flat_map(|p| suites::check_strata(p, &cfg(200)))
        .collect();
    recs.extend(
        [(1, 2), (2, 4), (2, 5), (3, 6)].iter().flat_map(|&(p, n)| suites::check_ideal_dictionary(p, n, &cfg(200))),
    );
    from_records(recs)
}

fn criterion_9() -> Outcome {
    let recs = [params(2, 2, 4), params(3, 2, 5), params(4, 3, 6), params(3, 3, 6)]
        .iter()
        .flat_map(|p| suites::check_oracle(p, &cfg(100)))
        .collect();
    from_records(recs)
}

fn criterion_10() -> Outcome {
    from_records([params(2, 2, 4), params(3, 2, 5)].iter().map(|p| suites::check_source_sink(p, &cfg(50))).collect())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example matrices", criterion_1, Some(Duration::from_secs(1))),
        ("unit pivots of the normal forms", criterion_2, Some(Duration::from_secs(120))),
        ("embedding round trip", criterion_3, None),
        ("orbit signatures", criterion_4, None),
        ("orbit curve degrees", criterion_5, None),
        ("retraction contract", criterion_6, None),
        ("Kausz diagram", criterion_7, None),
        ("determinantal dictionary", criterion_8, None),
        ("Plücker oracle", criterion_9, None),
        ("source-sink boundary data", criterion_10, None),
    ];
    let mut out = std::io::stdout().lock();
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(b) = budget {
            if took > *b {
                o.pass = false;
                o.detail = format!("{} (over the {:?} budget)", o.detail, b);
            }
        }
        failures += usize::from(!o.pass);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {:>2} {tag} {name} ({:.2?}): {}", i + 1, took, o.detail).unwrap();
    }
    if failures > 0 {
        writeln!(out, "{failures} criteria failed").unwrap();
        std::process::exit(1);
    }
}
