//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Time limits are wall-clock bounds on the
//! whole criterion.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use localchern::fixtures::{self, Fixture};
use localchern::germs::{special_scheme_ideal, LinearCollection, Partition, VarietyGerm};
use localchern::obstruction::{chern_obstruction, generic_linear_baseline, TrialConfig};
use localchern::polyring::{parse_polynomial, MonomialOrder, OneForm, Polynomial};
use localchern::stdbasis::{is_standard_basis, local_colength, standard_basis, Colength, EngineConfig, Ideal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict {
        ok: false,
        detail: detail.into(),
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return fail(format!($($msg)+));
        }
    };
}

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(format!("{name}.toml"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localchern")).args(args).output().expect("binary runs")
}

/// Runs a command on a problem file in machine format.
fn machine(cmd: &str, name: &str, extra: &[&str]) -> (Option<i32>, Value, String) {
    let path = problem(name);
    let mut args = vec![cmd, path.to_str().unwrap(), "--format", "machine"];
    args.extend_from_slice(extra);
    let out = cli(&args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), v, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn int(v: &Value, key: &str) -> Option<i64> {
    v[key].as_i64()
}

fn random_poly<R: Rng>(nvars: usize, degree: u32, terms: usize, rng: &mut R) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut t = Polynomial::from_integer(nvars, rng.gen_range(1..=4) * if rng.gen() { 1 } else { -1 });
        for _ in 0..rng.gen_range(0..=degree) {
            t = &t * &Polynomial::variable(nvars, rng.gen_range(0..nvars));
        }
        p = &p + &t;
    }
    p
}

fn random_linear_change<R: Rng>(n: usize, rng: &mut R) -> Vec<Polynomial> {
    loop {
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let images: Vec<Polynomial> = a
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(Polynomial::zero(n), |acc, (j, c)| {
                    &acc + &(&Polynomial::from_integer(n, *c) * &Polynomial::variable(n, j))
                })
            })
            .collect();
        // Invertible iff the pulled-back coordinate forms stay independent:
        // the images generate the maximal ideal with colength one.
        let ideal = Ideal::new(n, images.clone());
        if local_colength(&ideal, &EngineConfig::default()) == Ok(Colength::Finite(1)) {
            return images;
        }
    }
}

fn criterion_1() -> Verdict {
    let (code, v, err) = machine("check", "cone-dx", &[]);
    ensure!(code == Some(0), "check exited {code:?}: {err}");
    let got = (int(&v, "algIndex"), int(&v, "baseline"), int(&v, "chern"), int(&v, "oracleCount"));
    ensure!(got == (Some(2), Some(2), Some(0), Some(0)), "got (alg, baseline, Ch, count) = {got:?}");
    pass("alg_index 2, baseline 2, Ch 0, oracle count 0")
}

fn criterion_2() -> Verdict {
    let mut details = Vec::new();
    for (name, expected) in [("smooth-cubic", 4), ("smooth-radial", 1)] {
        let start = Instant::now();
        let (code, v, err) = machine("check", name, &[]);
        let took = start.elapsed();
        ensure!(code == Some(0), "{name}: check exited {code:?}: {err}");
        let got = (int(&v, "algIndex"), int(&v, "chern"), int(&v, "oracleCount"));
        ensure!(got == (Some(expected), Some(expected), Some(expected)), "{name}: (alg, Ch, count) = {got:?}");
        ensure!(took < Duration::from_secs(5), "{name} took {took:?}");
        details.push(format!("{name} Ch = count = {expected}"));
    }
    pass(details.join(", "))
}

fn criterion_3() -> Verdict {
    let (code, v, err) = machine("check", "smooth-two-blocks", &[]);
    ensure!(code == Some(0), "check exited {code:?}: {err}");
    let got = (int(&v, "chern"), int(&v, "oracleCount"));
    ensure!(got == (Some(1), Some(1)), "(Ch, count) = {got:?}");
    pass("partition (1,1): Ch 1, oracle count 1")
}

fn criterion_4() -> Verdict {
    for f in [fixtures::cone_dx(), fixtures::threefold_dx(), fixtures::a2_dx()] {
        let mut values = Vec::new();
        for seed in 0..20 {
            match generic_linear_baseline(&f.germ, f.collection.partition(), &TrialConfig::with_seed(seed)) {
                Ok(b) => values.push(b.value),
                Err(e) => return fail(format!("{} seed {seed}: {e}", f.name)),
            }
        }
        ensure!(values.iter().all(|v| *v == values[0]), "{}: baselines {values:?}", f.name);
    }
    for n in 1..=3 {
        for p in Partition::all_of(n) {
            for seed in 0..3 {
                let b = generic_linear_baseline(&VarietyGerm::smooth(n), &p, &TrialConfig::with_seed(seed));
                ensure!(
                    matches!(&b, Ok(b) if b.value == 0),
                    "C^{n} partition {:?} seed {seed}: {b:?}",
                    p.parts()
                );
            }
        }
    }
    pass("cone 2, A1 threefold 2, A2 surface 3 over 20 seeds; 0 on C^n for every partition, n <= 3")
}

fn criterion_5() -> Verdict {
    let mut seen = Vec::new();
    for f in [fixtures::cone_dx(), fixtures::cone_dxy(), fixtures::cone_weighted(), fixtures::cone_tilted()] {
        match chern_obstruction(&f.germ, &f.collection, &TrialConfig::default()) {
            Ok(r) => seen.push((f.name, r.alg_index, r.alg_index as i64 - r.chern)),
            Err(e) => return fail(format!("{}: {e}", f.name)),
        }
    }
    ensure!(seen.iter().all(|s| s.2 == 2), "alg_index - Ch per collection: {seen:?}");
    let distinct: std::collections::BTreeSet<u64> = seen.iter().map(|s| s.1).collect();
    ensure!(distinct.len() >= 2, "collections do not differ in index: {seen:?}");
    pass(format!("alg_index - Ch = 2 for {} collections with indices {distinct:?}", seen.len()))
}

const BATTERY: &[&str] = &[
    "smooth-cubic",
    "smooth-radial",
    "smooth-two-blocks",
    "cone-dx",
    "cone-dxy",
    "cone-weighted",
    "cone-tilted",
    "cone-two-blocks",
    "cone-constant-blocks",
    "a2-dx",
    "a2-dxy",
    "cusp-dx",
    "space-curve-dz",
    "threefold-dx",
];

fn criterion_6() -> Verdict {
    let (mut multi_block, mut smooth, mut singular) = (0, 0, 0);
    for name in BATTERY {
        let (code, v, err) = machine("check", name, &[]);
        ensure!(code == Some(0) && v["verdict"] == "PASS", "{name}: exit {code:?}, {err}");
        ensure!(
            v["oracle"]["deformationsAgreeing"] == 3 && v["oracle"]["chartsAgreeing"] == 2,
            "{name}: oracle agreement {}",
            v["oracle"]
        );
        if v["problem"]["partition"].as_array().map_or(0, Vec::len) > 1 {
            multi_block += 1;
        }
        if v["problem"]["equations"].as_array().is_some_and(Vec::is_empty) {
            smooth += 1;
        } else {
            singular += 1;
        }
    }
    ensure!(BATTERY.len() >= 8 && multi_block > 0 && smooth > 0 && singular > 0, "battery does not span the cases");
    pass(format!(
        "{} fixtures ({smooth} smooth, {singular} singular, {multi_block} with two blocks)",
        BATTERY.len()
    ))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let list = [fixtures::cone_dxy(), fixtures::a2_dx(), fixtures::cusp_dx(), fixtures::space_curve_dz()];
    for f in &list {
        let base = match chern_obstruction(&f.germ, &f.collection, &TrialConfig::default()) {
            Ok(r) => r.chern,
            Err(e) => return fail(format!("{}: {e}", f.name)),
        };
        let n = f.germ.nvars();
        for trial in 0..3 {
            let moved = f.collection.map_forms(|_, _, w| {
                let mut out = w.clone();
                for g in f.germ.equations() {
                    let eta = OneForm::new((0..n).map(|_| random_poly(n, 2, 2, &mut rng)).collect());
                    let h = random_poly(n, 2, 3, &mut rng);
                    out = out.add(&eta.times(g)).add(&OneForm::differential(g).times(&h));
                }
                out
            });
            match chern_obstruction(&f.germ, &moved, &TrialConfig::default()) {
                Ok(r) => ensure!(r.chern == base, "{} trial {trial}: Ch {} != {base}", f.name, r.chern),
                Err(e) => return fail(format!("{} trial {trial}: {e}", f.name)),
            }
        }
    }
    pass(format!("{} fixtures x 3 random (eta, h)", list.len()))
}

fn criterion_8() -> Verdict {
    let (code, _, err) = machine("chern", "umbrella-dx", &[]);
    ensure!(code == Some(2), "chern exited {code:?}");
    ensure!(err.contains("non-isolated special scheme"), "chern stderr: {err}");
    let (code, v, err) = machine("check", "umbrella-dx", &[]);
    ensure!(code == Some(3) && v["verdict"] == "FAIL", "check exited {code:?}: {err}");
    ensure!(
        v["cause"].as_str().is_some_and(|c| c.contains("non-isolated special scheme")),
        "check cause {}",
        v["cause"]
    );
    let (_, v, _) = machine("scheme", "umbrella-dx", &[]);
    ensure!(v["scheme"]["colength"] == "infinite", "scheme colength {}", v["scheme"]["colength"]);
    pass("chern exits 2, check FAILs with the cause, colength infinite")
}

fn collection_ideals(f: &Fixture, rng: &mut ChaCha8Rng) -> Vec<Ideal> {
    let mut out = vec![special_scheme_ideal(&f.germ, &f.collection).unwrap()];
    let ell = LinearCollection::random(f.germ.nvars(), f.collection.partition(), 10_000, rng);
    out.push(special_scheme_ideal(&f.germ, ell.collection()).unwrap());
    out
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bases = 0;
    let mut changes = 0;
    for f in fixtures::isolated() {
        for ideal in collection_ideals(&f, &mut rng) {
            for order in [MonomialOrder::LocalNegDegRevLex, MonomialOrder::GlobalDegRevLex] {
                if order == MonomialOrder::GlobalDegRevLex && ideal.generators().iter().any(|g| g.len() > 30) {
                    // Global bases of large minors are not needed anywhere.
                    continue;
                }
                let sb = match standard_basis(&ideal, order) {
                    Ok(sb) => sb,
                    Err(e) => return fail(format!("{} {order:?}: {e}", f.name)),
                };
                ensure!(is_standard_basis(sb.elements(), order), "{} {order:?}: criterion fails", f.name);
                bases += 1;
            }
            let base = local_colength(&ideal, &EngineConfig::default());
            for _ in 0..5 {
                let images = random_linear_change(ideal.nvars(), &mut rng);
                let moved = Ideal::new(ideal.nvars(), ideal.generators().iter().map(|g| g.substitute(&images)));
                let c = local_colength(&moved, &EngineConfig::default());
                ensure!(c == base, "{}: colength {c:?} != {base:?} after a linear change", f.name);
                changes += 1;
            }
        }
    }

    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    for i in 0..100 {
        let mut p = random_poly(3, 4, 6, &mut rng);
        if i % 3 == 0 {
            p = p.scale(&localchern::polyring::Rational::new(1.into(), (i as i64 % 7 + 2).into()));
        }
        let text = p.render(&names);
        match parse_polynomial(&text, &names) {
            Ok(back) => ensure!(back == p && back.render(&names) == text, "round trip of `{text}`"),
            Err(e) => return fail(format!("`{text}` does not re-parse: {e}")),
        }
    }

    for name in ["cone-dxy", "smooth-two-blocks", "a2-dx"] {
        for cmd in ["chern", "check"] {
            let path = problem(name);
            let args = [cmd, path.to_str().unwrap(), "--format", "machine", "--seed", "42"];
            let (a, b) = (cli(&args), cli(&args));
            ensure!(!a.stdout.is_empty() && a.stdout == b.stdout, "{cmd} {name}: reports differ");
        }
    }
    pass(format!(
        "{bases} completed bases satisfy the criterion, {changes} coordinate changes, 100 round trips, identical reports"
    ))
}

/// Number, title, time limit in seconds and the check itself.
type Criterion = (&'static str, &'static str, u64, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1", "cone regression", 5, criterion_1),
        ("2", "smooth coincidence", 10, criterion_2),
        ("3", "multi-block fixture", 5, criterion_3),
        ("4", "baseline stability", 60, criterion_4),
        ("5", "index minus obstruction is constant", 30, criterion_5),
        ("6", "conservation of number", 300, criterion_6),
        ("7", "class invariance", 120, criterion_7),
        ("8", "non-isolated rejection", 5, criterion_8),
        ("9", "engine properties", 600, criterion_9),
    ];
    let mut failures = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let mut v = run();
        let took = start.elapsed();
        if v.ok && took > Duration::from_secs(limit) {
            v = fail(format!("{} (exceeded the time limit)", v.detail));
        }
        if !v.ok {
            failures += 1;
        }
        println!(
            "{} criterion {id} {title}: {} [{:.2}s, limit {limit}s]",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
