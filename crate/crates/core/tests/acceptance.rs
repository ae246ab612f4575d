//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness. Failing criteria are reported but only
//! turn into a non-zero exit when `ACCEPTANCE_STRICT=1`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use sgpoid::decomposition::{d_relation, interchangeable, Strategy};
use sgpoid::fixtures;
use sgpoid::format::FunctorSpec;
use sgpoid::pipeline::decompose;
use sgpoid::random;
use sgpoid::relational::{validate_relational_morphism_ts, RelationalFunctor};
use sgpoid::semigroupoid::{ArrowId, Semigroupoid};
use sgpoid::transformation::{
    compose_transformations, full_transformation_semigroup, image_typed_semigroupoid,
    pad_with_identities, pinhole_typed_semigroupoid, sink_completion, Transformation,
    TransformationSemigroupoid,
};
use sgpoid::verify;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(
        start.elapsed() < limit,
        format!("took {:?}, limit {limit:?}", start.elapsed()),
    )
}

fn concrete(name: &str) -> TransformationSemigroupoid {
    fixtures::sgd(name).unwrap().concrete().unwrap().clone()
}

fn closure(ts: &TransformationSemigroupoid) -> TransformationSemigroupoid {
    let gens = (0..ts.arrow_count())
        .map(|a| (ts.label(a).to_string(), ts.transformation(a).clone()))
        .collect();
    TransformationSemigroupoid::generate_closure(ts.state_sets().to_vec(), gens).unwrap()
}

fn arrow(s: &Semigroupoid, label: &str) -> ArrowId {
    s.arrow_by_label(label)
        .unwrap_or_else(|| panic!("no arrow {label}"))
}

fn flip_flop_table() -> Outcome {
    let ts = concrete("flipflop.sgd");
    let s = ts.abstract_();
    let expected = [
        ("r", "r", "r"),
        ("r", "w0", "w0"),
        ("r", "w1", "w1"),
        ("w0", "r", "w0"),
        ("w0", "w0", "w0"),
        ("w0", "w1", "w1"),
        ("w1", "r", "w1"),
        ("w1", "w0", "w0"),
        ("w1", "w1", "w1"),
    ];
    ensure(
        s.table().len() == 9,
        format!("{} table entries", s.table().len()),
    )?;
    for (f, g, h) in expected {
        ensure(
            s.product(arrow(s, f), arrow(s, g)) == Some(arrow(s, h)),
            format!("{f}·{g} should be {h}"),
        )?;
    }
    let mut state = 0;
    let mut visited = vec![state];
    for word in ["w1", "r", "r", "w0", "r", "w1", "r"] {
        state = ts.transformation(arrow(s, word)).mapping[state];
        visited.push(state);
    }
    ensure(
        visited == [0, 1, 1, 1, 0, 0, 1, 1],
        format!("trajectory {visited:?}"),
    )?;
    Ok("9 entries, trajectory 0,1,1,1,0,0,1,1".into())
}

fn fig2_types() -> Outcome {
    let doc = fixtures::sgd("fig2.sgd").unwrap();
    let s = doc.semigroupoid();
    ensure(doc.validate().is_empty(), "fixture does not validate")?;
    let ty = |a: ArrowId| format!("{}{}", s.object_label(s.dom(a)), s.object_label(s.cod(a)));
    let computed: BTreeSet<(String, String, String)> = s
        .table()
        .iter()
        .map(|(&(f, g), &h)| (ty(f), ty(g), ty(h)))
        .collect();
    let expected: BTreeSet<(String, String, String)> = [
        ("XX", "XX", "XX"),
        ("XX", "XY", "XY"),
        ("XY", "YY", "YY"),
        ("YY", "YY", "YY"),
    ]
    .iter()
    .map(|&(a, b, c)| (a.into(), b.into(), c.into()))
    .collect();
    let missing: Vec<_> = expected.difference(&computed).collect();
    let extra: Vec<_> = computed.difference(&expected).collect();
    ensure(
        missing.is_empty() && extra.is_empty(),
        format!(
            "type table differs: expected but absent {missing:?}, present but unexpected {extra:?}"
        ),
    )?;
    Ok("type table matches".into())
}

fn z4_pipeline() -> Outcome {
    let start = Instant::now();
    let loaded = fixtures::functor("z4phi.fun").unwrap();
    let FunctorSpec::Morphism(m) = &loaded.spec else {
        return Err("z4phi.fun is not a morphism of transformation semigroups".into());
    };
    let violations = validate_relational_morphism_ts(m).map_err(|e| e.to_string())?;
    ensure(
        violations.is_empty(),
        "relational morphism does not validate",
    )?;
    let pinhole = pinhole_typed_semigroupoid(m).map_err(|e| e.to_string())?;
    let labels: Vec<&str> = pinhole
        .ts
        .state_sets()
        .iter()
        .map(|s| s.label.as_str())
        .collect();
    ensure(labels == ["{0,2}", "{1,3}"], format!("objects {labels:?}"))?;
    let rendered: BTreeSet<String> = pinhole
        .ts
        .transformations()
        .iter()
        .map(|t| pinhole.ts.render(t))
        .collect();
    for want in ["(0 2 / 2 0)", "(1 3 / 3 1)"] {
        ensure(rendered.contains(want), format!("no restriction {want}"))?;
    }
    let run = decompose(&loaded, Strategy::Objects).map_err(|e| e.to_string())?;
    let report = run.report();
    ensure(
        report.bottom_states == Some(2),
        format!("bottom states {:?}", report.bottom_states),
    )?;
    ensure(
        report.certificate.valid,
        report.certificate.defects.join("; "),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "2-state bottom, certificate valid, {:?}",
        start.elapsed()
    ))
}

fn all_functors(seed: u64) -> Vec<(String, RelationalFunctor)> {
    let mut out = verify::fixture_functors();
    let mut rng = random::rng(seed);
    out.extend((0..100).map(|i| (format!("random case {i}"), random::random_functor(&mut rng))));
    out
}

fn run_check(
    functors: &[(String, RelationalFunctor)],
    check: impl Fn(&RelationalFunctor) -> verify::Check,
) -> Result<usize, String> {
    for (name, phi) in functors {
        check(phi).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(functors.len())
}

fn tracing_embeds(seed: u64) -> Outcome {
    let start = Instant::now();
    let n = run_check(&all_functors(seed), verify::tracing_embeds)?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{n} functors, seed {seed}"))
}

fn uncompressed(seed: u64) -> Outcome {
    let n = run_check(&all_functors(seed), verify::uncompressed_is_tracing)?;
    Ok(format!("{n} functors, seed {seed}"))
}

fn tn(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(seed);
    for n in 2..=4usize {
        let t = full_transformation_semigroup(n);
        ensure(
            t.arrow_count() == n.pow(n as u32),
            format!("|T_{n}| = {}", t.arrow_count()),
        )?;
        let (typed, phi) = image_typed_semigroupoid(&t).map_err(|e| e.to_string())?;
        let objects = (1 << n) - 1;
        ensure(
            typed.state_sets().len() == objects,
            format!("T_{n}: {} objects", typed.state_sets().len()),
        )?;
        for a in 0..t.arrow_count() {
            ensure(
                phi.image(a).len() == objects,
                format!("T_{n}: arrow {a} has {} images", phi.image(a).len()),
            )?;
        }
        let s = phi.target();
        let check = |a: ArrowId, b: ArrowId| -> Result<(), String> {
            let ab = t.abstract_().compose(a, b).map_err(|e| e.to_string())?;
            ensure(
                s.compose_sets(phi.image(a), phi.image(b)) == *phi.image(ab),
                format!("T_{n}: φ({a})φ({b}) ≠ φ({ab})"),
            )
        };
        if n <= 3 {
            for a in 0..t.arrow_count() {
                for b in 0..t.arrow_count() {
                    check(a, b)?;
                }
            }
        } else {
            for _ in 0..1000 {
                check(
                    rng.gen_range(0..t.arrow_count()),
                    rng.gen_range(0..t.arrow_count()),
                )?;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("n = 2, 3, 4 in {:?}", start.elapsed()))
}

fn dual_mode() -> Outcome {
    let closed = closure(&concrete("dualmode.sgd"));
    let (_, pad) = pad_with_identities(&closed);
    let (_, sink) = sink_completion(&closed);
    let orbit = pad.orbit_witness.as_ref().map(|w| w.orbit.len());
    let mut problems = Vec::new();
    if closed.arrow_count() != 7 {
        problems.push(format!(
            "closure has {} arrows, expected 7",
            closed.arrow_count()
        ));
    }
    if orbit != Some(6) {
        problems.push(format!("pad orbit {orbit:?}"));
    }
    if sink.completed_state_count != 6 {
        problems.push(format!(
            "sink completion has {} states",
            sink.completed_state_count
        ));
    }
    ensure(problems.is_empty(), problems.join("; "))?;
    Ok("7 arrows, orbit 6, 6 states".into())
}

fn vessels() -> Outcome {
    let ts = concrete("vessels.sgd");
    let s = ts.abstract_();
    let t = |l: &str| ts.transformation(arrow(s, l)).clone();
    let path = |ls: &[&str]| -> Result<Transformation, String> {
        ls[1..].iter().try_fold(t(ls[0]), |acc, l| {
            compose_transformations(&acc, &t(l)).map_err(|e| e.to_string())
        })
    };
    let cycle = path(&["g", "c", "f"])?;
    let reset = path(&["f", "r", "g"])?;
    ensure(
        cycle == Transformation::new(1, 1, vec![1, 0]),
        format!("g·c·f = {}", ts.render(&cycle)),
    )?;
    ensure(
        reset == Transformation::new(0, 0, vec![1, 1]),
        format!("f·r·g = {}", ts.render(&reset)),
    )?;
    Ok(format!(
        "g·c·f = {}, f·r·g = {}",
        ts.render(&cycle),
        ts.render(&reset)
    ))
}

fn no_compression() -> Outcome {
    let doc = fixtures::sgd("nocompress.sgd").unwrap();
    let s = doc.semigroupoid();
    let transporters: Vec<ArrowId> = (0..s.arrow_count())
        .filter(|&a| s.dom(a) != s.cod(a))
        .collect();
    let loaded = fixtures::functor("nocompress.fun").unwrap();
    for strategy in [Strategy::Sets, Strategy::Objects, Strategy::None] {
        let run = decompose(&loaded, strategy).map_err(|e| e.to_string())?;
        ensure(
            run.cascade.product.pair_set() == run.tracing.pair_set(),
            format!("strategy {strategy}: cascade arrows differ from the tracing product"),
        )?;
    }
    for &f in &transporters {
        for &g in &transporters {
            if f != g {
                if let Some(w) = interchangeable(s, f, g) {
                    return Err(format!(
                        "{} ~ {} via ({}, {}, {}, {}); cascade arrow sets equal the tracing product",
                        s.arrow_label(f),
                        s.arrow_label(g),
                        s.arrow_label(w.x_to_z),
                        s.arrow_label(w.z_to_x),
                        s.arrow_label(w.y_to_u),
                        s.arrow_label(w.u_to_y)
                    ));
                }
            }
        }
    }
    Ok(format!("{} transporters, no witness", transporters.len()))
}

fn odometer() -> Outcome {
    let run = decompose(
        &fixtures::functor("odometer2x2.fun").unwrap(),
        Strategy::Sets,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        run.certificate.valid(),
        run.certificate.describe().join("; "),
    )?;
    let top = run.functor.target();
    let src = run.functor.source();
    let rules = run.cascade.rule_table();
    let one = arrow(top, "+1'");
    for (&(f, g), &carry) in &rules.carries {
        let want = if (f, g) == (one, one) { "+2" } else { "+0" };
        ensure(
            carry.map(|k| src.arrow_label(k)) == Some(want),
            format!(
                "cell ({}, {}) carries {:?}",
                top.arrow_label(f),
                top.arrow_label(g),
                carry
            ),
        )?;
    }
    let cascade = &run.cascade.product.semigroupoid;
    let c = arrow(cascade, "(+1',+0)");
    let identity = arrow(cascade, "(+0',+0)");
    let mut powers = vec![c];
    loop {
        let next = cascade
            .compose(*powers.last().unwrap(), c)
            .map_err(|e| e.to_string())?;
        if powers.contains(&next) {
            break;
        }
        powers.push(next);
    }
    ensure(powers.len() == 4, format!("c has order {}", powers.len()))?;
    ensure(powers[3] == identity, "c⁴ is not the identity")?;
    Ok(format!(
        "carry only in (+1',+1'), c has order 4 with c⁴ = {}",
        cascade.arrow_label(identity)
    ))
}

fn d_relation_agreement() -> Outcome {
    let mut cases: Vec<(&str, Semigroupoid)> = ["flipflop.sgd", "z2.sgd", "z4.sgd"]
        .iter()
        .map(|n| (*n, fixtures::sgd(n).unwrap().semigroupoid().clone()))
        .collect();
    cases.push(("T_2", full_transformation_semigroup(2).abstract_().clone()));
    cases.push(("T_3", full_transformation_semigroup(3).abstract_().clone()));
    let mut pairs = 0;
    let mut disagreements = Vec::new();
    for (name, s) in &cases {
        for f in 0..s.arrow_count() {
            for g in 0..s.arrow_count() {
                if f == g {
                    continue;
                }
                pairs += 1;
                let i = interchangeable(s, f, g).is_some();
                let d = d_relation(s, f, g).map_err(|e| e.to_string())?;
                if i != d {
                    disagreements.push(format!(
                        "{name}: {} {}",
                        s.arrow_label(f),
                        s.arrow_label(g)
                    ));
                }
            }
        }
    }
    ensure(disagreements.is_empty(), disagreements.join(", "))?;
    Ok(format!("{pairs} pairs agree"))
}

fn codec_and_composition(seed: u64) -> Outcome {
    let functors = all_functors(seed);
    for strategy in [Strategy::Sets, Strategy::Objects] {
        run_check(&functors, |phi| verify::codec_identities(phi, strategy))?;
    }
    let mut chains: Vec<(String, RelationalFunctor, RelationalFunctor)> =
        verify::fixture_functors()
            .into_iter()
            .flat_map(|(name, phi)| {
                let t = phi.target_arc().clone();
                [
                    (
                        format!("{name} then types"),
                        phi.clone(),
                        RelationalFunctor::to_types(t.clone()),
                    ),
                    (
                        format!("{name} then trivial"),
                        phi,
                        RelationalFunctor::to_trivial(t),
                    ),
                ]
            })
            .collect();
    let mut rng = random::rng(seed);
    chains.extend((0..100).map(|i| {
        let (a, b) = random::random_chain(&mut rng);
        (format!("random chain {i}"), a, b)
    }));
    for (name, a, b) in &chains {
        verify::chain_closure(a, b).map_err(|e| {
            format!("codec identities hold; composition closure fails on {name}: {e}")
        })?;
    }
    Ok(format!(
        "{} functors, {} chains, seed {seed}",
        functors.len(),
        chains.len()
    ))
}

fn main() {
    let seed = random::seed_from_env();
    let criteria: Vec<Criterion> = vec![
        ("flip-flop table and trajectory", Box::new(flip_flop_table)),
        ("two-object hom-set type table", Box::new(fig2_types)),
        ("Z4 pinhole pipeline", Box::new(z4_pipeline)),
        (
            "tracing product embeds injectively",
            Box::new(move || tracing_embeds(seed)),
        ),
        (
            "uncompressed cascade is the tracing product",
            Box::new(move || uncompressed(seed)),
        ),
        (
            "full transformation semigroups and image typing",
            Box::new(move || tn(seed)),
        ),
        ("dual-mode counter", Box::new(dual_mode)),
        ("communicating vessels", Box::new(vessels)),
        ("no-compression example", Box::new(no_compression)),
        ("odometer rule table", Box::new(odometer)),
        (
            "interchangeability agrees with the D-relation",
            Box::new(d_relation_agreement),
        ),
        (
            "codec identities and functor composition",
            Box::new(move || codec_and_composition(seed)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {status}: {name}: {detail} [{:?}]",
            i + 1,
            start.elapsed()
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
