//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refbloch::bloch::verify::{cyclic_order, run_suite, Suite, SuiteReport};
use refbloch::bloch::{constant_b, BlochField};
use refbloch::field::FiniteField;
use refbloch::laurent::{fuzz, DEFAULT_SEED};
use refbloch::linalg::{cokernel_invariants, IntMatrix};
use refbloch::tower::{eigenspace_ledger, predict, SummandKind, TowerSpec};

const BLOCH_QS: [u64; 13] = [4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27];
const FIELD_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn fields_up_to(max: u64) -> Vec<BlochField> {
    common::prime_powers(max).into_iter().map(|q| BlochField::of_order(q).unwrap()).collect()
}

/// Runs `suite` on every field; reports failing checks by name.
fn sweep(fields: &[BlochField], suite: Suite, only: &[&str]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for f in fields {
        let r: SuiteReport = run_suite(f, suite).map_err(|e| format!("q={}: {e}", f.q()))?;
        for c in r.checks.iter().filter(|c| c.gating && (only.is_empty() || only.contains(&c.name.as_str()))) {
            checked += c.checked;
            if !c.passed {
                bad.push(format!("q={} {} ({} failures)", f.q(), c.name, c.failures));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{} fields, {checked} instances", fields.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn bloch_orders() -> Outcome {
    let mut slowest = (0, Duration::ZERO);
    for q in BLOCH_QS {
        let start = Instant::now();
        let f = BlochField::of_order(q).map_err(|e| e.to_string())?;
        let b = f.bloch_group().map_err(|e| e.to_string())?.presentation.invariants();
        let dt = start.elapsed();
        if dt > slowest.1 {
            slowest = (q, dt);
        }
        let want = common::bloch_order(q);
        if cyclic_order(&b) != Some(want) {
            return Err(format!("q={q}: B = {b}, expected Z/{want}"));
        }
        if dt > FIELD_BUDGET {
            return Err(format!("q={q} took {dt:.1?}"));
        }
    }
    Ok(format!("13 fields cyclic of the expected order, slowest q={} in {:.2?}", slowest.0, slowest.1))
}

fn trivial_action() -> Outcome {
    for q in BLOCH_QS {
        let f = BlochField::of_order(q).map_err(|e| e.to_string())?;
        let rb = f.refined_bloch().map_err(|e| e.to_string())?;
        let odd_b = f.bloch_group().map_err(|e| e.to_string())?.presentation.invariants().odd_part();
        if !rb.rb0_is_trivial() {
            return Err(format!("q={q}: nontrivial eigenspace {:?}", rb.rb0()));
        }
        if rb.trivial_part() != &odd_b {
            return Err(format!("q={q}: trivial eigenspace {} but odd B = {odd_b}", rb.trivial_part()));
        }
    }
    Ok("chi != 1 eigenspaces vanish and chi = 1 matches odd B for all 13 fields".into())
}

fn constants(fields: &[BlochField]) -> Outcome {
    let swept = sweep(fields, Suite::Constants, &[])?;
    for p in [5u64, 7, 11, 13, 17, 19] {
        let c = constant_b(&BlochField::of_order(p).unwrap()).map_err(|e| e.to_string())?;
        let want = common::c_order_prime(p);
        if !c.c_order.is(want) {
            return Err(format!("p={p}: order of c is {}, expected {want}", c.c_order));
        }
    }
    Ok(format!("{swept}; c orders match for p in 5..19"))
}

fn df1() -> Outcome {
    let mut integral = Vec::new();
    for q in [5u64, 7, 11, 13] {
        let f = BlochField::of_order(q).unwrap();
        let r = run_suite(&f, Suite::Df).map_err(|e| e.to_string())?;
        let c = r.checks.iter().find(|c| c.name == "df1_difference").ok_or("df1 check missing")?;
        if !c.passed {
            return Err(format!("q={q}: {} failures {:?}", c.failures, c.examples));
        }
        integral.push(format!("q={q}:{}", if c.integral_failures == Some(0) { "integral" } else { "odd-only" }));
    }
    Ok(format!("holds after inverting 2 for all x; {}", integral.join(" ")))
}

fn specialization_fuzz() -> Outcome {
    let mut parts = Vec::new();
    for (q, n, samples) in [(5u64, 64usize, 500usize), (7, 32, 200)] {
        let k = FiniteField::of_order(q).unwrap();
        let r = fuzz(&k, n, samples, DEFAULT_SEED).map_err(|e| e.to_string())?;
        if !r.failures.is_empty() || r.unresolved > 0 || r.inconclusive_rate() >= 0.05 {
            return Err(format!(
                "F_{q}: {} failures, {} unresolved, inconclusive rate {:.3}",
                r.failures.len(),
                r.unresolved,
                r.inconclusive_rate()
            ));
        }
        parts.push(format!("F_{q} N={n}: {samples} zero, inconclusive {:.1}%", 100.0 * r.inconclusive_rate()));
    }
    Ok(parts.join("; "))
}

fn tower_shape() -> Outcome {
    let spec = TowerSpec::parse("5", 2).map_err(|e| e.to_string())?;
    let r = predict(&spec).map_err(|e| e.to_string())?;
    if r.exponents != [2, 1] {
        return Err(format!("exponents {:?}", r.exponents));
    }
    let lvl0 = r.summands.iter().find(|s| s.level == Some(0)).ok_or("no level-0 summand")?;
    match lvl0.invariants.as_ref().and_then(|i| i.factors_u64()) {
        Some(f) if f == [3] => {}
        other => return Err(format!("level-0 invariants {other:?}")),
    }
    if !r.all_verified() || r.surjection_only {
        return Err("hypothesis checklist not fully verified".into());
    }
    if eigenspace_ledger(&spec).census != r.exponents {
        return Err("census disagrees with exponents".into());
    }
    for base in ["Q_5", "real-closed"] {
        let r = predict(&TowerSpec::parse(base, 2).unwrap()).map_err(|e| e.to_string())?;
        let symbolic = r.summands.iter().filter(|s| s.kind != SummandKind::PreblochNumeric).count();
        if r.summands.iter().filter(|s| s.kind == SummandKind::K3indSymbolic).count() != 1 || symbolic == 0 {
            return Err(format!("{base}: unexpected summands {}", r.formula()));
        }
    }
    Ok(format!("{}; Q_5 and R reports symbolic", r.formula()))
}

fn snf_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for i in 0..1000 {
        let (m, cols) = common::random_matrix(&mut rng, 12, 9);
        let inv = cokernel_invariants(&IntMatrix::from_rows(&m, cols).unwrap(), cols).map_err(|e| e.to_string())?;
        let (factors, free) = common::snf_oracle(&m, cols);
        if inv.factors() != &factors[..] || inv.free_rank() != free {
            return Err(format!("matrix {i}: {inv} vs oracle {factors:?} + Z^{free}"));
        }
    }
    Ok("1000 random matrices up to 12x12 agree".into())
}

fn main() {
    let small = fields_up_to(31);
    let criteria: Vec<Criterion> = vec![
        ("finite-field Bloch orders", Box::new(bloch_orders)),
        ("trivial refined action on finite fields", Box::new(trivial_action)),
        (
            "Lambda well-defined, q <= 31",
            Box::new(|| sweep(&small, Suite::Lambda, &["lambda1_kills_relations", "lambda2_kills_relations"])),
        ),
        ("Suslin identities, q <= 31", Box::new(|| sweep(&small, Suite::Suslin, &[]))),
        ("constants", Box::new(|| constants(&small))),
        ("df(1) identity", Box::new(df1)),
        ("specialization fuzz", Box::new(specialization_fuzz)),
        ("tower prediction shape", Box::new(tower_shape)),
        ("SNF oracle equivalence", Box::new(snf_oracle)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let dt = start.elapsed();
        match out {
            Ok(msg) => println!("criterion {} PASS [{name}] {msg} ({dt:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {msg} ({dt:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
