//! Fundamental pairs on matrix-entry rings: Calogero–Moser, its rank-two
//! variant, and cyclic quiver varieties.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{rat, ratio, Polynomial, Rational, VarTable};
use crate::check::{assert_eq_poly, Assertion};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::ideal::{groebner, GroebnerGuards};
use crate::parse::parse_rational;
use crate::sl2::{
    check_relations, relation_residuals, FundamentalPair, RelationCheckConfig, RelationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Cm,
    CmRank2,
    Quiver,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Cm => "cm",
            ModelKind::CmRank2 => "cm-rank2",
            ModelKind::Quiver => "quiver",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_rational"
    )]
    pub tau: Option<Rational>,
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "rationals")]
    pub lambda: Vec<Rational>,
}

fn opt_rational<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn rationals<S: serde::Serializer>(rs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub name: ModelKind,
    pub params: ModelParams,
    pub pair: FundamentalPair,
    /// Relation polynomials with their additive constants dropped.
    pub moment_generators: Vec<Polynomial>,
    /// The defining relations of the locus, constants included.
    pub relations: Vec<Polynomial>,
    pub certificate_fn: Polynomial,
}

impl ModelInstance {
    pub fn vars(&self) -> &Arc<VarTable> {
        self.pair.vars()
    }
}

type Matrix = Vec<Vec<Polynomial>>;

fn zeros(vars: &Arc<VarTable>, rows: usize, cols: usize) -> Matrix {
    vec![vec![Polynomial::zero(vars); cols]; rows]
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let vars = a[0][0].vars().clone();
    let mut out = zeros(&vars, a.len(), b[0].len());
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] = &out[i][j] + &(aik * bkj);
                }
            }
        }
    }
    out
}

fn matsub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn trace(a: &Matrix) -> Polynomial {
    let vars = a[0][0].vars().clone();
    (0..a.len()).fold(Polynomial::zero(&vars), |acc, i| &acc + &a[i][i])
}

fn var_matrix(vars: &Arc<VarTable>, prefix: &str, rows: usize, cols: usize) -> Matrix {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    Polynomial::var_named(vars, &format!("{prefix}_{i}_{j}")).expect("declared")
                })
                .collect()
        })
        .collect()
}

fn matrix_names(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| format!("{prefix}_{i}_{j}")))
        .collect()
}

fn entries(m: &Matrix) -> Vec<Polynomial> {
    m.iter().flatten().cloned().collect()
}

/// Derivation sending the entries of each source matrix to the matching
/// entries of its image.
fn derivation_from(vars: &Arc<VarTable>, assignments: &[(&Matrix, &Matrix)]) -> Result<Derivation> {
    let mut images = vec![Polynomial::zero(vars); vars.len()];
    for (source, target) in assignments {
        for (srow, trow) in source.iter().zip(target.iter()) {
            for (s, t) in srow.iter().zip(trow) {
                let (m, _) = s.leading_term()?;
                let k = m
                    .exponents()
                    .iter()
                    .position(|&e| e == 1)
                    .expect("variable");
                images[k] = t.clone();
            }
        }
    }
    Derivation::new(vars, images)
}

fn neg(m: &Matrix) -> Matrix {
    m.iter().map(|r| r.iter().map(|p| -p).collect()).collect()
}

/// Calogero–Moser: `D = X ∂/∂Y`, `U = Y ∂/∂X` on `n×n` matrices.
pub fn build_cm(n: usize) -> Result<ModelInstance> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let mut names = matrix_names("X", n, n);
    names.extend(matrix_names("Y", n, n));
    let vars = VarTable::new(names)?;
    let x = var_matrix(&vars, "X", n, n);
    let y = var_matrix(&vars, "Y", n, n);
    let d = derivation_from(&vars, &[(&y, &x)])?;
    let u = derivation_from(&vars, &[(&x, &y)])?;
    let comm = matsub(&matmul(&x, &y), &matmul(&y, &x));
    // rank([X,Y] + I) = 1: all 2×2 minors vanish
    let shifted: Matrix = comm
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, p)| {
                    if i == j {
                        p + &Polynomial::one(&vars)
                    } else {
                        p.clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut relations = Vec::new();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for j1 in 0..n {
                for j2 in j1 + 1..n {
                    relations.push(
                        &(&shifted[i1][j1] * &shifted[i2][j2])
                            - &(&shifted[i1][j2] * &shifted[i2][j1]),
                    );
                }
            }
        }
    }
    Ok(ModelInstance {
        name: ModelKind::Cm,
        params: ModelParams {
            n,
            m: None,
            tau: None,
            lambda: vec![],
        },
        pair: FundamentalPair::new(d, u)?,
        moment_generators: entries(&comm),
        relations,
        certificate_fn: trace(&x),
    })
}

/// Rank-two Calogero–Moser: `[A,B] - v1 w1 - v2 w2 = τ I`.
pub fn build_cm_rank2(n: usize, tau: Rational) -> Result<ModelInstance> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let mut names = matrix_names("A", n, n);
    names.extend(matrix_names("B", n, n));
    for p in ["v1", "v2", "w1", "w2"] {
        names.extend((0..n).map(|i| format!("{p}_{i}")));
    }
    let vars = VarTable::new(names)?;
    let a = var_matrix(&vars, "A", n, n);
    let b = var_matrix(&vars, "B", n, n);
    let column = |p: &str| -> Matrix {
        (0..n)
            .map(|i| vec![Polynomial::var_named(&vars, &format!("{p}_{i}")).expect("declared")])
            .collect()
    };
    let row = |p: &str| -> Matrix {
        vec![(0..n)
            .map(|i| Polynomial::var_named(&vars, &format!("{p}_{i}")).expect("declared"))
            .collect()]
    };
    let (v1, v2, w1, w2) = (column("v1"), column("v2"), row("w1"), row("w2"));
    let d = derivation_from(&vars, &[(&b, &a), (&v2, &v1), (&w1, &neg(&w2))])?;
    let u = derivation_from(&vars, &[(&a, &b), (&v1, &v2), (&w2, &neg(&w1))])?;
    let moment = matsub(
        &matsub(&matsub(&matmul(&a, &b), &matmul(&b, &a)), &matmul(&v1, &w1)),
        &matmul(&v2, &w2),
    );
    let relations = moment
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            let tau = tau.clone();
            let vars = vars.clone();
            r.iter().enumerate().map(move |(j, p)| {
                if i == j {
                    p - &Polynomial::constant(&vars, tau.clone())
                } else {
                    p.clone()
                }
            })
        })
        .collect();
    Ok(ModelInstance {
        name: ModelKind::CmRank2,
        params: ModelParams {
            n,
            m: None,
            tau: Some(tau),
            lambda: vec![],
        },
        pair: FundamentalPair::new(d, u)?,
        moment_generators: entries(&moment),
        relations,
        certificate_fn: trace(&a),
    })
}

/// Default `λ_i = i + 1`.
pub fn default_lambda(m: usize) -> Vec<Rational> {
    (1..=m as i64).map(rat).collect()
}

/// Block matrices of the cyclic quiver: `X_a` in block `(a, a+1)`, `Y_a` in
/// block `(a+1, a)`, indices mod `m`.
struct QuiverMatrices {
    x: Matrix,
    y: Matrix,
    xb: Vec<Matrix>,
    yb: Vec<Matrix>,
    v: Matrix,
    w: Matrix,
}

fn block(big: &Matrix, n: usize, r: usize, c: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| big[r * n + i][c * n + j].clone()).collect())
        .collect()
}

fn quiver_matrices(vars: &Arc<VarTable>, m: usize, n: usize) -> QuiverMatrices {
    let size = m * n;
    let mut x = zeros(vars, size, size);
    let mut y = zeros(vars, size, size);
    let mut xb = Vec::new();
    let mut yb = Vec::new();
    for a in 0..m {
        let b = (a + 1) % m;
        let xa = var_matrix(vars, &format!("X_{a}"), n, n);
        let ya = var_matrix(vars, &format!("Y_{a}"), n, n);
        for i in 0..n {
            for j in 0..n {
                x[a * n + i][b * n + j] = xa[i][j].clone();
                y[b * n + i][a * n + j] = ya[i][j].clone();
            }
        }
        xb.push(xa);
        yb.push(ya);
    }
    let mut v = zeros(vars, size, 1);
    let mut w = zeros(vars, 1, size);
    for i in 0..n {
        v[i][0] = Polynomial::var_named(vars, &format!("v_{i}")).expect("declared");
        w[0][i] = Polynomial::var_named(vars, &format!("w_{i}")).expect("declared");
    }
    QuiverMatrices { x, y, xb, yb, v, w }
}

fn matpow(a: &Matrix, k: usize) -> Matrix {
    let vars = a[0][0].vars().clone();
    let mut out = zeros(&vars, a.len(), a.len());
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = Polynomial::one(&vars);
    }
    (0..k).fold(out, |acc, _| matmul(&acc, a))
}

/// Cyclic quiver with `m` vertices of dimension `n`: `D = X^{m-1} ∂/∂Y`,
/// `U = Y^{m-1} ∂/∂X`; for `m = 1`, `D = X ∂/∂Y` and `U = Y ∂/∂X`.
pub fn build_quiver(m: usize, n: usize, lambda: &[Rational]) -> Result<ModelInstance> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be positive".into()));
    }
    if lambda.len() != m {
        return Err(Error::Precondition(format!(
            "lambda needs {m} entries, got {}",
            lambda.len()
        )));
    }
    let mut names = Vec::new();
    for a in 0..m {
        names.extend(matrix_names(&format!("X_{a}"), n, n));
    }
    for a in 0..m {
        names.extend(matrix_names(&format!("Y_{a}"), n, n));
    }
    names.extend((0..n).map(|i| format!("v_{i}")));
    names.extend((0..n).map(|i| format!("w_{i}")));
    let vars = VarTable::new(names)?;
    let q = quiver_matrices(&vars, m, n);
    let (d, u) = if m == 1 {
        (
            derivation_from(&vars, &[(&q.yb[0], &q.xb[0])])?,
            derivation_from(&vars, &[(&q.xb[0], &q.yb[0])])?,
        )
    } else {
        let xp = matpow(&q.x, m - 1);
        let yp = matpow(&q.y, m - 1);
        let d_targets: Vec<Matrix> = (0..m).map(|a| block(&xp, n, (a + 1) % m, a)).collect();
        let u_targets: Vec<Matrix> = (0..m).map(|a| block(&yp, n, a, (a + 1) % m)).collect();
        let d_pairs: Vec<(&Matrix, &Matrix)> = q.yb.iter().zip(&d_targets).collect();
        let u_pairs: Vec<(&Matrix, &Matrix)> = q.xb.iter().zip(&u_targets).collect();
        (
            derivation_from(&vars, &d_pairs)?,
            derivation_from(&vars, &u_pairs)?,
        )
    };
    let moment = matsub(&matmul(&q.x, &q.y), &matmul(&q.y, &q.x));
    let moment: Matrix = moment
        .iter()
        .zip(matmul(&q.v, &q.w))
        .map(|(r, s)| r.iter().zip(s).map(|(p, t)| p + &t).collect())
        .collect();
    let wv = matmul(&q.w, &q.v)[0][0].clone();
    let lambda_alpha: Rational = lambda.iter().sum::<Rational>() * rat(n as i64);
    let mut moment_generators = entries(&moment);
    moment_generators.push(wv.clone());
    let mut relations = Vec::new();
    for (i, r) in moment.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            relations.push(if i == j {
                p - &Polynomial::constant(&vars, lambda[i / n].clone())
            } else {
                p.clone()
            });
        }
    }
    relations.push(&wv - &Polynomial::constant(&vars, lambda_alpha));
    Ok(ModelInstance {
        name: ModelKind::Quiver,
        params: ModelParams {
            n,
            m: Some(m),
            tau: None,
            lambda: lambda.to_vec(),
        },
        pair: FundamentalPair::new(d, u)?,
        moment_generators,
        relations,
        certificate_fn: trace(&matmul(&q.x, &q.y)),
    })
}

/// Ambient sl₂ relations of the model's pair.
pub fn check_model_relations(model: &ModelInstance) -> Result<RelationReport> {
    check_relations(&model.pair, &RelationCheckConfig::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateCheckReport {
    pub passed: bool,
    pub function: Polynomial,
    /// `(f, U f, U² f, …)` for cm models, `(f, D f, U f)` for quivers.
    pub chain: Vec<Polynomial>,
    pub assertions: Vec<Assertion>,
}

/// Checks the model's distinguished function: `f ∈ ker D` with `deg_U f = 1`
/// (cm, cm-rank2), or the trace identities for `f = Tr XY` (quiver).
pub fn check_certificate(model: &ModelInstance) -> Result<CertificateCheckReport> {
    let (d, u) = (model.pair.d(), model.pair.u());
    let f = &model.certificate_fn;
    let zero = Polynomial::zero(model.vars());
    let mut assertions = Vec::new();
    let chain;
    match model.name {
        ModelKind::Cm | ModelKind::CmRank2 => {
            assertions.push(assert_eq_poly("D f = 0", &d.apply(f)?, &zero));
            let report = u.nilpotency_degree(f, u.default_cap(f))?;
            let deg_u = report.degree;
            assertions.push(Assertion {
                name: format!("deg_U f = 1 (found {deg_u})"),
                passed: deg_u == 1,
                difference: None,
            });
            chain = report.chain;
        }
        ModelKind::Quiver => {
            let m = model.params.m.expect("quiver has m");
            let n = model.params.n;
            let q = quiver_matrices(model.vars(), m, n);
            let df = d.apply(f)?;
            let uf = u.apply(f)?;
            let scale = rat(m as i64);
            let (expected_df, expected_uf, label) = if m == 1 {
                (
                    trace(&matmul(&q.xb[0], &q.xb[0])),
                    trace(&matmul(&q.yb[0], &q.yb[0])),
                    ("Tr X^2", "Tr Y^2"),
                )
            } else {
                let xs =
                    q.xb.iter()
                        .skip(1)
                        .fold(q.xb[0].clone(), |acc, b| matmul(&acc, b));
                let ys =
                    q.yb.iter()
                        .rev()
                        .skip(1)
                        .fold(q.yb[m - 1].clone(), |acc, b| matmul(&acc, b));
                (
                    trace(&xs).scale(&scale),
                    trace(&ys).scale(&scale),
                    ("m Tr(X_0 ... X_{m-1})", "m Tr(Y_{m-1} ... Y_0)"),
                )
            };
            assertions.push(assert_eq_poly(
                &format!("D f = {}", label.0),
                &df,
                &expected_df,
            ));
            assertions.push(assert_eq_poly(
                &format!("U f = {}", label.1),
                &uf,
                &expected_uf,
            ));
            if m >= 2 {
                assertions.push(assert_eq_poly(
                    "D f = Tr X^m",
                    &df,
                    &trace(&matpow(&q.x, m)),
                ));
            }
            assertions.push(assert_eq_poly("D(D f) = 0", &d.apply(&df)?, &zero));
            assertions.push(assert_eq_poly("U(U f) = 0", &u.apply(&uf)?, &zero));
            chain = vec![f.clone(), df, uf];
        }
    }
    Ok(CertificateCheckReport {
        passed: assertions.iter().all(|a| a.passed),
        function: f.clone(),
        chain,
        assertions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub passed: bool,
    pub generators: usize,
    pub failures: Vec<Assertion>,
}

/// Every moment generator is annihilated by `D` and by `U` in the ambient ring.
pub fn check_moment_invariance(model: &ModelInstance) -> Result<InvarianceReport> {
    let zero = Polynomial::zero(model.vars());
    let mut failures = Vec::new();
    for (k, g) in model.moment_generators.iter().enumerate() {
        for (label, der) in [("D", model.pair.d()), ("U", model.pair.u())] {
            let a = assert_eq_poly(
                &format!("{label}(generator {k}) = 0"),
                &der.apply(g)?,
                &zero,
            );
            if !a.passed {
                failures.push(a);
            }
        }
    }
    Ok(InvarianceReport {
        passed: failures.is_empty(),
        generators: model.moment_generators.len(),
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Groebner,
    Points,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientViolation {
    pub relation: String,
    pub variable: String,
    pub residual: Polynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub passed: bool,
    pub mode: CheckMode,
    #[serde(rename = "relationsChecked")]
    pub relations_checked: usize,
    #[serde(rename = "basisSize", skip_serializing_if = "Option::is_none")]
    pub basis_size: Option<usize>,
    #[serde(rename = "unitIdeal", skip_serializing_if = "Option::is_none")]
    pub unit_ideal: Option<bool>,
    #[serde(rename = "pointsChecked", skip_serializing_if = "Option::is_none")]
    pub points_checked: Option<usize>,
    pub violation: Option<QuotientViolation>,
}

/// A point on the relation locus, one coordinate per variable.
pub type Point = Vec<Rational>;

/// Parses `{"assignments": {...}}` or an array of such objects.
pub fn parse_points(json: &serde_json::Value, vars: &Arc<VarTable>) -> Result<Vec<Point>> {
    let items: Vec<&serde_json::Value> = match json {
        serde_json::Value::Array(items) => items.iter().collect(),
        other => vec![other],
    };
    items
        .into_iter()
        .map(|item| {
            let obj = item
                .get("assignments")
                .and_then(|a| a.as_object())
                .ok_or_else(|| Error::Json("point needs an \"assignments\" object".into()))?;
            let mut point = vec![None; vars.len()];
            for (name, value) in obj {
                let k = vars
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                let text = match value {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    _ => return Err(Error::Json(format!("value of {name} is not a rational"))),
                };
                point[k] = Some(parse_rational(&text)?);
            }
            point
                .into_iter()
                .enumerate()
                .map(|(k, c)| {
                    c.ok_or_else(|| Error::Json(format!("point misses variable {}", vars.name(k))))
                })
                .collect()
        })
        .collect()
}

fn assign(vars: &Arc<VarTable>, values: &[(String, Rational)]) -> Point {
    let mut point = vec![rat(0); vars.len()];
    for (name, value) in values {
        point[vars.index_of(name).expect("model variable")] = value.clone();
    }
    point
}

/// Built-in rational points on the relation locus, where the model admits
/// an explicit parameterization.
pub fn builtin_points(model: &ModelInstance) -> Result<Vec<Point>> {
    let n = model.params.n;
    let vars = model.vars();
    let samples: [(i64, i64); 4] = [(1, 1), (2, -1), (-3, 2), (5, 3)];
    let mut points = Vec::new();
    match model.name {
        ModelKind::Cm => {
            // X diagonal with distinct entries, Y_ij = 1/(x_i - x_j) off the diagonal
            for (s, t) in samples {
                let x: Vec<Rational> = (0..n as i64)
                    .map(|i| ratio(s * (i + 1), 1) + ratio(t, 7))
                    .collect();
                let mut values = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let xv = if i == j { x[i].clone() } else { rat(0) };
                        let yv = if i == j {
                            ratio(t + i as i64, 2)
                        } else {
                            (&x[i] - &x[j]).recip()
                        };
                        values.push((format!("X_{i}_{j}"), xv));
                        values.push((format!("Y_{i}_{j}"), yv));
                    }
                }
                points.push(assign(vars, &values));
            }
        }
        ModelKind::CmRank2 => {
            // A diagonal, B_ij = -τ/(a_i - a_j), v1 = 1, w1 = -τ, v2 = w2 = 0
            let tau = model.params.tau.clone().expect("cm-rank2 has tau");
            for (s, t) in samples {
                let a: Vec<Rational> = (0..n as i64)
                    .map(|i| ratio(s * (i + 1), 1) + ratio(t, 5))
                    .collect();
                let mut values = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let av = if i == j { a[i].clone() } else { rat(0) };
                        let bv = if i == j {
                            ratio(3 * t - i as i64, 4)
                        } else {
                            -&tau / (&a[i] - &a[j])
                        };
                        values.push((format!("A_{i}_{j}"), av));
                        values.push((format!("B_{i}_{j}"), bv));
                    }
                    values.push((format!("v1_{i}"), rat(1)));
                    values.push((format!("w1_{i}"), -tau.clone()));
                }
                points.push(assign(vars, &values));
            }
        }
        ModelKind::Quiver => {
            if n != 1 {
                return Err(Error::Precondition(
                    "built-in quiver points exist only for n = 1; supply a point file".into(),
                ));
            }
            let m = model.params.m.expect("quiver has m");
            let lambda = &model.params.lambda;
            // X_a free and nonzero, Y_a = p_a / X_a with p_a - p_{a-1} = λ_a, v = 1, w = Σλ
            for (s, t) in samples {
                let mut values = Vec::new();
                let mut p = ratio(t, 3);
                for a in 0..m {
                    if a > 0 {
                        p += &lambda[a];
                    }
                    let xa = ratio(s + a as i64 * t, 1 + a as i64);
                    let xa = if xa == rat(0) { rat(1) } else { xa };
                    values.push((format!("Y_{a}_0_0"), &p / &xa));
                    values.push((format!("X_{a}_0_0"), xa));
                }
                values.push(("v_0".to_string(), rat(1)));
                values.push(("w_0".to_string(), lambda.iter().sum()));
                points.push(assign(vars, &values));
            }
        }
    }
    Ok(points)
}

fn named_point(vars: &Arc<VarTable>, point: &Point) -> BTreeMap<String, String> {
    point
        .iter()
        .enumerate()
        .map(|(k, c)| (vars.name(k).to_string(), c.to_string()))
        .collect()
}

/// sl₂ relations `([D,E] + 2D)(v) = 0` and `([U,E] - 2U)(v) = 0` for every
/// variable `v`, modulo the relation ideal (groebner) or on points of the
/// locus (points).
pub fn check_sl2_mod_ideal(
    model: &ModelInstance,
    mode: CheckMode,
    points: Option<&[Point]>,
) -> Result<QuotientReport> {
    let residuals = relation_residuals(&model.pair)?;
    let polys: Vec<(&str, &str, &Polynomial)> = residuals
        .iter()
        .flat_map(|(name, r1, r2)| {
            [
                ("[D,E] + 2D", name.as_str(), r1),
                ("[U,E] - 2U", name.as_str(), r2),
            ]
        })
        .collect();
    let mut report = QuotientReport {
        passed: false,
        mode,
        relations_checked: polys.len(),
        basis_size: None,
        unit_ideal: None,
        points_checked: None,
        violation: None,
    };
    match mode {
        CheckMode::Groebner => {
            let ideal = groebner(&model.relations, GroebnerGuards::default())?;
            let unit = ideal.is_unit()?;
            report.basis_size = ideal.groebner_basis().map(<[_]>::len);
            report.unit_ideal = Some(unit);
            for (relation, variable, r) in &polys {
                let nf = ideal.normal_form(r)?;
                if !nf.is_zero() {
                    report.violation = Some(QuotientViolation {
                        relation: relation.to_string(),
                        variable: variable.to_string(),
                        residual: nf,
                        point: None,
                        value: None,
                    });
                    break;
                }
            }
            // the unit ideal makes every check vacuous
            report.passed = !unit && report.violation.is_none();
        }
        CheckMode::Points => {
            let owned;
            let points = match points {
                Some(p) => p,
                None => {
                    owned = builtin_points(model)?;
                    &owned
                }
            };
            for point in points {
                for rel in &model.relations {
                    if !rel.evaluate(point)?.is_zero() {
                        return Err(Error::OffLocus(format!(
                            "relation {rel} does not vanish at the point"
                        )));
                    }
                }
            }
            'outer: for point in points {
                for (relation, variable, r) in &polys {
                    let value = r.evaluate(point)?;
                    if !value.is_zero() {
                        report.violation = Some(QuotientViolation {
                            relation: relation.to_string(),
                            variable: variable.to_string(),
                            residual: (*r).clone(),
                            point: Some(named_point(model.vars(), point)),
                            value: Some(value.to_string()),
                        });
                        break 'outer;
                    }
                }
            }
            report.points_checked = Some(points.len());
            report.passed = !points.is_empty() && report.violation.is_none();
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowReport {
    pub passed: bool,
    pub t: String,
    pub assertions: Vec<Assertion>,
}

/// `exp(tD)` fixes the `D`-killed coordinates and shears the others by
/// `t·D(v)` (e.g. `Y ↦ Y + t X^{m-1}`); likewise for `exp(tU)`.
pub fn check_flow_shear(model: &ModelInstance, t: &Rational) -> Result<FlowReport> {
    let vars = model.vars();
    let mut assertions = Vec::new();
    for (label, der) in [("D", model.pair.d()), ("U", model.pair.u())] {
        for k in 0..vars.len() {
            let x = Polynomial::var(vars, k);
            let image = der.image(k);
            let flowed = der.exp_apply(t, &x, der.default_cap(&x))?;
            let expected = &x + &image.scale(t);
            let a = assert_eq_poly(
                &format!(
                    "exp(t{label})({}) = {} + t*({image})",
                    vars.name(k),
                    vars.name(k)
                ),
                &flowed,
                &expected,
            );
            if !a.passed {
                assertions.push(a);
            }
        }
        assertions.push(Assertion {
            name: format!("exp(t{label}) checked on all {} variables", vars.len()),
            passed: true,
            difference: None,
        });
    }
    if model.name == ModelKind::Quiver {
        let m = model.params.m.expect("quiver has m");
        let n = model.params.n;
        let q = quiver_matrices(vars, m, n);
        let power = if m == 1 {
            q.x.clone()
        } else {
            matpow(&q.x, m - 1)
        };
        let d = model.pair.d();
        for a in 0..m {
            let target = if m == 1 {
                q.xb[0].clone()
            } else {
                block(&power, n, (a + 1) % m, a)
            };
            for i in 0..n {
                for j in 0..n {
                    let y = &q.yb[a][i][j];
                    let flowed = d.exp_apply(t, y, d.default_cap(y))?;
                    let a = assert_eq_poly(
                        &format!("Y_{a}_{i}_{j} -> Y + t X^(m-1) entrywise"),
                        &flowed,
                        &(y + &target[i][j].scale(t)),
                    );
                    assertions.push(a);
                }
            }
        }
    }
    Ok(FlowReport {
        passed: assertions.iter().all(|a| a.passed),
        t: t.to_string(),
        assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cm_images_and_generators() {
        let cm = build_cm(2).unwrap();
        let p = |s: &str| cm.pair.parse(s).unwrap();
        assert_eq!(cm.pair.d().apply(&p("Y_0_1")).unwrap(), p("X_0_1"));
        assert!(check_moment_invariance(&cm).unwrap().passed);
        assert!(build_cm(1)
            .unwrap()
            .moment_generators
            .iter()
            .all(Polynomial::is_zero));
        assert!(check_model_relations(&cm).unwrap().passed);
        let cert = check_certificate(&cm).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.chain[1], p("Y_0_0 + Y_1_1"));
    }

    #[test]
    fn cm_rank2_images() {
        let model = build_cm_rank2(1, rat(1)).unwrap();
        let p = |s: &str| model.pair.parse(s).unwrap();
        assert_eq!(model.pair.d().apply(&p("v2_0")).unwrap(), p("v1_0"));
        assert_eq!(model.pair.d().apply(&p("w1_0")).unwrap(), p("-w2_0"));
        assert_eq!(model.pair.weight_of(&p("A_0_0")).unwrap(), Some(1));
        assert!(check_moment_invariance(&model).unwrap().passed);
        assert!(check_certificate(&model).unwrap().passed);
    }

    #[test]
    fn quiver_block_positions() {
        let q = build_quiver(2, 1, &default_lambda(2)).unwrap();
        let p = |s: &str| q.pair.parse(s).unwrap();
        assert_eq!(q.pair.d().apply(&p("Y_0_0_0")).unwrap(), p("X_1_0_0"));
        assert_eq!(q.pair.d().apply(&p("Y_1_0_0")).unwrap(), p("X_0_0_0"));
        assert!(check_model_relations(&q).unwrap().passed);
        let cert = check_certificate(&q).unwrap();
        assert!(cert.passed, "{cert:?}");
        assert_eq!(cert.chain[1], p("2*X_0_0_0*X_1_0_0"));
    }

    #[test]
    fn quiver_m1_is_scalar_cm() {
        let q = build_quiver(1, 1, &default_lambda(1)).unwrap();
        let cert = check_certificate(&q).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.chain[1], q.pair.parse("X_0_0_0^2").unwrap());
    }

    #[test]
    fn quiver_m2_quotient_checks() {
        let q = build_quiver(2, 1, &default_lambda(2)).unwrap();
        let r = check_sl2_mod_ideal(&q, CheckMode::Groebner, None).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_sl2_mod_ideal(&q, CheckMode::Points, None).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn builtin_points_lie_on_the_locus() {
        let models = [
            build_cm(3).unwrap(),
            build_cm_rank2(2, ratio(3, 2)).unwrap(),
            build_quiver(3, 1, &default_lambda(3)).unwrap(),
            build_quiver(4, 1, &[rat(1), rat(-2), ratio(1, 2), rat(5)]).unwrap(),
        ];
        for model in &models {
            for point in builtin_points(model).unwrap() {
                for rel in &model.relations {
                    assert!(
                        rel.evaluate(&point).unwrap() == rat(0),
                        "{} off locus",
                        model.name
                    );
                }
            }
        }
    }

    #[test]
    fn point_file_parsing() {
        let q = build_quiver(1, 1, &[rat(2)]).unwrap();
        let json = serde_json::json!({"assignments": {"X_0_0_0": "1/2", "Y_0_0_0": "3", "v_0": "1", "w_0": 2}});
        let pts = parse_points(&json, q.vars()).unwrap();
        assert_eq!(pts[0][0], ratio(1, 2));
        assert!(
            check_sl2_mod_ideal(&q, CheckMode::Points, Some(&pts))
                .unwrap()
                .passed
        );
        let off = serde_json::json!({"assignments": {"X_0_0_0": "1", "Y_0_0_0": "3", "v_0": "1", "w_0": "5"}});
        let pts = parse_points(&off, q.vars()).unwrap();
        assert!(matches!(
            check_sl2_mod_ideal(&q, CheckMode::Points, Some(&pts)),
            Err(Error::OffLocus(_))
        ));
    }

    #[test]
    fn flow_is_a_shear() {
        for model in [
            build_cm(2).unwrap(),
            build_quiver(2, 2, &default_lambda(2)).unwrap(),
            build_quiver(3, 1, &default_lambda(3)).unwrap(),
        ] {
            let r = check_flow_shear(&model, &ratio(-2, 3)).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
