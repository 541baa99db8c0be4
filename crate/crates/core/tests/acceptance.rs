//! Acceptance run: one line per criterion, exit status 1 if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use sl2lnd::algebra::rat;
use sl2lnd::golden::{golden, Suite};
use sl2lnd::grading::{
    cayley_sylvester, component, criterion, kernel_basis, verify_named_certificates, Verdict,
};
use sl2lnd::models::{
    build_cm, build_cm_rank2, build_quiver, check_certificate, check_model_relations,
    check_moment_invariance, check_sl2_mod_ideal, default_lambda, CheckMode, ModelInstance,
};
use sl2lnd::sl2::{
    beta_decompose, check_relations, gamma_reduce, isotypic_decompose, monomials_of_degree,
    verify_identity2, verify_operator_identity, GammaReducer, RelationCheckConfig,
};
use sl2lnd::{basic_pair, Polynomial, Which};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn c1_relations() -> Outcome {
    for d in 1..=8 {
        let report = check_relations(
            &basic_pair(d).map_err(err)?,
            &RelationCheckConfig::default(),
        )
        .map_err(err)?;
        ensure(report.passed, || format!("d={d}: {:?}", report.violation))?;
    }
    Ok("basic pairs d=1..8 satisfy [D,E]=-2D, [U,E]=2U and the sampled bracket identity".into())
}

fn c2_golden() -> Outcome {
    let r = golden(Suite::D3).map_err(err)?;
    let failed: Vec<&str> = r
        .assertions
        .iter()
        .filter(|a| !a.passed)
        .map(|a| a.name.as_str())
        .collect();
    ensure(r.passed, || format!("failed: {failed:?}"))?;
    Ok(format!("{} identities exact", r.assertions.len()))
}

fn c3_identities() -> Outcome {
    let mut checked = 0;
    for d in 1..=4 {
        let p = basic_pair(d).map_err(err)?;
        for degree in 0..=4 {
            for m in monomials_of_degree(p.vars().len(), degree) {
                let f = Polynomial::monomial(p.vars(), m, rat(1));
                for a in 1..=3 {
                    for b in 1..=3 {
                        let r = verify_operator_identity(&p, &f, a, b).map_err(err)?;
                        ensure(r.holds, || {
                            format!("d={d}, m={a}, n={b}, f={f}: residual {}", r.residual)
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    let mut kernel_checked = 0;
    for d in 1..=4 {
        let p = basic_pair(d).map_err(err)?;
        for degree in 0..=4 {
            for w in 0..=4 {
                for f in kernel_basis(&p, Which::D, degree, w).map_err(err)? {
                    for n in 1..=3 {
                        let r = verify_identity2(&p, &f, n).map_err(err)?;
                        ensure(r.holds, || format!("d={d}, f={f}, n={n}"))?;
                        kernel_checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checked} operator-identity cases, {kernel_checked} kernel-element cases"
    ))
}

fn c4_oracle() -> Outcome {
    let mut slices = 0;
    for d in 1..=6 {
        let p = basic_pair(d).map_err(err)?;
        for j in 0..=6u32 {
            let top = (j as i64) * d as i64;
            for w in -top..=top {
                let comp = component(&p, j, w).map_err(err)?;
                let dim = comp.kernel_dimension(Which::D).map_err(err)?;
                let cs = cayley_sylvester(d, j as usize, w);
                ensure(dim as u128 == cs, || {
                    format!("d={d}, j={j}, w={w}: nullspace {dim}, formula {cs}")
                })?;
                if (top - w) % 2 == 0 {
                    slices += 1;
                }
            }
        }
    }
    Ok(format!(
        "{slices} parity-admissible slices (and all others) agree"
    ))
}

fn c5_hermite() -> Outcome {
    for d in 0..=8 {
        for j in 0..=8 {
            for i in 0..=4 {
                let (a, b) = (cayley_sylvester(d, j, i), cayley_sylvester(j, d, i));
                ensure(a == b, || format!("d={d}, j={j}, i={i}: {a} != {b}"))?;
            }
        }
    }
    Ok("all 405 triples agree".into())
}

fn c6_criterion() -> Outcome {
    let v1 = criterion(&basic_pair(1).map_err(err)?, 1).map_err(err)?;
    ensure(
        v1.pair_compatible
            .certificate()
            .is_some_and(|c| c.degree == 1),
        || format!("d=1: {:?}", v1.pair_compatible),
    )?;

    let p3 = basic_pair(3).map_err(err)?;
    let v3 = criterion(&p3, 9).map_err(err)?;
    let t2 = p3.parse("2*x0*x2 - x1^2").map_err(err)?;
    ensure(
        v3.triple_compatible
            .certificate()
            .is_some_and(|c| c.element.proportionality(&t2).is_some()),
        || format!("d=3: A2 {:?}", v3.triple_compatible),
    )?;
    ensure(v3.pair_compatible == Verdict::NotFoundBelowBound, || {
        "d=3: A1 found".into()
    })?;
    let a1: Vec<Option<usize>> = v3.counts.iter().map(|c| c.a1).collect();
    ensure(a1.len() == 9 && a1.iter().all(|c| *c == Some(0)), || {
        format!("d=3: A1 counts {a1:?}")
    })?;

    let v4 = criterion(&basic_pair(4).map_err(err)?, 10).map_err(err)?;
    let a2: Vec<Option<usize>> = v4.counts.iter().map(|c| c.a2).collect();
    ensure(a2.len() == 10 && a2.iter().all(|c| *c == Some(0)), || {
        format!("d=4: A2 counts {a2:?}")
    })?;
    ensure(v4.pair_compatible == Verdict::ImpossibleByParity, || {
        format!("d=4: A1 {:?}", v4.pair_compatible)
    })?;

    let v5 = criterion(&basic_pair(5).map_err(err)?, 5).map_err(err)?;
    ensure(
        v5.pair_compatible
            .certificate()
            .is_some_and(|c| c.degree == 5),
        || format!("d=5: {:?}", v5.pair_compatible),
    )?;

    let v7 = criterion(&basic_pair(7).map_err(err)?, 7).map_err(err)?;
    let c7 = v7
        .pair_compatible
        .certificate()
        .ok_or("d=7: no A1 certificate within bound 7")?;
    Ok(format!(
        "A2(d=3) = {}; A1(d=5) at degree 5; A1(d=7) at degree {}",
        v3.triple_compatible.certificate().unwrap().element,
        c7.degree
    ))
}

fn c7_named() -> Outcome {
    let r = verify_named_certificates().map_err(err)?;
    ensure(r.passed, || {
        format!(
            "{:?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        )
    })?;
    Ok(format!(
        "{} checks (elements and scalar multiples)",
        r.checks.len()
    ))
}

fn c8_isotypic() -> Outcome {
    let mut rng = common::rng(8);
    for d in 1..=4 {
        let p = basic_pair(d).map_err(err)?;
        for _ in 0..100 {
            let f = common::random_polynomial(&mut rng, p.vars(), 5, 6);
            let dec = isotypic_decompose(&p, &f).map_err(err)?;
            ensure(dec.sum(&p) == f, || {
                format!("d={d}: parts of {f} do not sum back")
            })?;
            for (n, part) in &dec.parts {
                ensure(p.d().apply_n(part, n + 1).map_err(err)?.is_zero(), || {
                    format!("d={d}: D^{} part_{n} != 0", n + 1)
                })?;
                let again = isotypic_decompose(&p, part).map_err(err)?;
                ensure(
                    again.parts.len() == 1 && again.parts.get(n) == Some(part),
                    || format!("d={d}: part_{n} of {f} not idempotent"),
                )?;
            }
        }
    }
    Ok("400 random inputs".into())
}

fn c9_free_module() -> Outcome {
    let mut rng = common::rng(9);
    for d in 1..=4 {
        let p = basic_pair(d).map_err(err)?;
        let reducer = GammaReducer::new(d).map_err(err)?;
        for (j, y) in reducer.generators().iter().enumerate() {
            let lm = y.leading_term().map_err(err)?.0;
            let mut sq = vec![0u32; d + 1];
            sq[j] = 2;
            ensure(lm.exponents() == sq.as_slice(), || {
                format!("d={d}: leading monomial of y_{j} is not x_{j}^2")
            })?;
        }
        for _ in 0..100 {
            let f = common::random_polynomial(&mut rng, p.vars(), 6, 6);
            let beta = beta_decompose(&f).map_err(err)?;
            ensure(beta.reassemble().map_err(err)? == f, || {
                format!("d={d}: beta round trip of {f}")
            })?;
            let gamma = gamma_reduce(d, &f).map_err(err)?;
            ensure(gamma.reassemble().map_err(err)? == f, || {
                format!("d={d}: gamma round trip of {f}")
            })?;
        }
    }
    Ok("400 random inputs; y_j leads with x_j^2".into())
}

fn check_model(model: &ModelInstance) -> Result<(), String> {
    let label = format!("{} {:?}", model.name, model.params);
    let rel = check_model_relations(model).map_err(err)?;
    ensure(rel.passed, || {
        format!("{label}: ambient relations {:?}", rel.violation)
    })?;
    let inv = check_moment_invariance(model).map_err(err)?;
    ensure(inv.passed, || {
        format!("{label}: moment generators not invariant")
    })?;
    let cert = check_certificate(model).map_err(err)?;
    ensure(cert.passed, || {
        format!(
            "{label}: {:?}",
            cert.assertions
                .iter()
                .filter(|a| !a.passed)
                .collect::<Vec<_>>()
        )
    })
}

fn c10_models() -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        check_model(&build_cm(n).map_err(err)?)?;
        count += 1;
    }
    for n in 1..=2 {
        check_model(&build_cm_rank2(n, rat(1)).map_err(err)?)?;
        count += 1;
    }
    for m in 1..=2 {
        for n in 1..=2 {
            check_model(&build_quiver(m, n, &default_lambda(m)).map_err(err)?)?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} models: ambient relations, moment invariance, certificate functions"
    ))
}

fn c11_quotient() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (m, mode) in [
        (2, CheckMode::Groebner),
        (2, CheckMode::Points),
        (3, CheckMode::Groebner),
        (3, CheckMode::Points),
    ] {
        let model = build_quiver(m, 1, &default_lambda(m)).map_err(err)?;
        let r = check_sl2_mod_ideal(&model, mode, None).map_err(err)?;
        ok &= r.passed;
        let detail = match &r.violation {
            None => "pass".to_string(),
            Some(v) => format!(
                "FAIL: {} at {} leaves {}",
                v.relation,
                v.variable,
                v.value
                    .as_deref()
                    .map_or(v.residual.to_string(), |x| format!("value {x}"))
            ),
        };
        lines.push(format!("m={m} {mode:?}: {detail}"));
    }
    let summary = lines.join("; ");
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn c12_scope() -> Outcome {
    let mut found = Vec::new();
    let models = [
        build_cm(2).map_err(err)?,
        build_cm_rank2(1, rat(1)).map_err(err)?,
        build_quiver(2, 1, &default_lambda(2)).map_err(err)?,
    ];
    for model in &models {
        let v = criterion(&model.pair, 2).map_err(err)?;
        let kind = match (&v.pair_compatible, &v.triple_compatible) {
            (Verdict::Yes { .. }, _) => "A1",
            (_, Verdict::Yes { .. }) => "A2",
            _ => return Err(format!("{}: no certificate below degree 2", model.name)),
        };
        found.push(format!("{} {kind}", model.name));
    }
    Ok(format!(
        "density property, transitivity, flexibility and jet interpolation are out of scope; \
         compatibility is certified only by A1/A2 certificates ({})",
        found.join(", ")
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "fundamental-pair relations", c1_relations, 1),
        (2, "golden cubic covariants", c2_golden, 1),
        (3, "operator identities", c3_identities, 30),
        (4, "counting oracle equivalence", c4_oracle, 60),
        (5, "Hermite reciprocity", c5_hermite, 5),
        (6, "criterion certificates", c6_criterion, 60),
        (7, "named kernel elements", c7_named, 1),
        (8, "isotypic decomposition", c8_isotypic, 60),
        (9, "free-module reductions", c9_free_module, 60),
        (10, "matrix models", c10_models, 30),
        (11, "quotient-level sl2 relations", c11_quotient, 60),
        (12, "scope of desk-scale reproduction", c12_scope, 60),
    ];
    let mut failures = 0;
    for (id, title, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("took {elapsed:?}, limit {limit} s; {detail}"))
            }
            other => other,
        };
        let ms = elapsed.as_millis();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS ({ms} ms) {title}: {detail}"),
            Err(reason) => {
                failures += 1;
                println!("criterion {id:>2} FAIL ({ms} ms) {title}: {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
