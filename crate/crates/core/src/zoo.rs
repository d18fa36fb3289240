//! Built-in example manifolds with their structures, soliton candidates and
//! expected values.

use crate::contact;
use crate::error::InputError;
use crate::sample::{AxisRange, SamplePlan, DEFAULT_RANDOM, DEFAULT_SEED};
use crate::session::{RunOptions, Session};
use crate::spec_file::{
    CandidateSpec, Expectation, ExpectedEntry, ExpectedValue, ManifoldSpecFile, Origin, SolitonKind, StructureClass, StructureSpec,
};

/// Names accepted by [`spec`]; `alpha-kenmotsu-<a>` and
/// `flat-cosymplectic-<m>` also accept other parameters.
pub const ENTRIES: [&str; 6] = ["paper-kenmotsu", "flat-cosymplectic-3", "flat-cosymplectic-5", "alpha-kenmotsu-2", "kenmotsu-5", "sasakian-r3"];

fn s(text: &str) -> String {
    text.to_string()
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|t| t.to_string()).collect()
}

fn diagonal(entries: &[String]) -> Vec<Vec<String>> {
    let m = entries.len();
    (0..m).map(|i| (0..m).map(|j| if i == j { entries[i].clone() } else { s("0") }).collect()).collect()
}

fn candidate(name: &str, potential: &[&str], lambda: &str, kind: SolitonKind, collinear: bool, expect: Expectation) -> CandidateSpec {
    CandidateSpec { name: s(name), potential: strings(potential), lambda: s(lambda), kind, collinear, expect }
}

fn entry(label: &str, origin: Origin, value: ExpectedValue) -> ExpectedEntry {
    ExpectedEntry { label: s(label), origin, value }
}

/// Number formatting used inside generated expressions.
fn num(v: f64) -> String {
    if v < 0.0 {
        format!("({v})")
    } else {
        format!("{v}")
    }
}

/// `φ` rotating the coordinate pairs `(x_k, y_k)`: `φ∂x_k = ∂y_k`, `φ∂y_k = −∂x_k`;
/// the last coordinate is the Reeb direction.
fn standard_phi(m: usize) -> Vec<Vec<String>> {
    let mut phi = vec![vec![s("0"); m]; m];
    for k in 0..(m - 1) / 2 {
        let (x, y) = (2 * k, 2 * k + 1);
        phi[y][x] = s("1");
        phi[x][y] = s("-1");
    }
    phi
}

fn reeb(m: usize) -> Vec<String> {
    (0..m).map(|i| if i + 1 == m { s("1") } else { s("0") }).collect()
}

fn pair_coordinates(m: usize) -> Vec<String> {
    if m == 3 {
        return strings(&["x", "y", "z"]);
    }
    let mut names = Vec::new();
    for k in 1..=(m - 1) / 2 {
        names.push(format!("x{k}"));
        names.push(format!("y{k}"));
    }
    names.push(s("z"));
    names
}

fn plan(coordinates: &[String], horizontal: (f64, f64, usize), vertical: (f64, f64, usize)) -> SamplePlan {
    let m = coordinates.len();
    let grid = coordinates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (lo, hi, n) = if i + 1 == m { vertical } else { horizontal };
            AxisRange::new(c, lo, hi, n)
        })
        .collect();
    SamplePlan { grid, random: DEFAULT_RANDOM, seed: DEFAULT_SEED }
}

/// The three-dimensional Kenmotsu manifold `z > 1` with
/// `g = e^{2z}(dx² + dy²) + dz²` and its almost Riemann, Ricci and Yamabe
/// solitons with potential `e^z ∂z`.
pub fn paper_kenmotsu() -> ManifoldSpecFile {
    use ExpectedValue::*;
    use Origin::*;
    let coordinates = strings(&["x", "y", "z"]);
    let v = ["0", "0", "exp(z)"];
    let xi = ["0", "0", "1"];
    let mut expected = vec![
        entry("∇_{E1}E1 = −E3", Published, Connection { a: 0, b: 0, result: strings(&["0", "0", "-1"]) }),
        entry("∇_{E2}E2 = −E3", Published, Connection { a: 1, b: 1, result: strings(&["0", "0", "-1"]) }),
        entry("∇_{E1}E3 = E1", Published, Connection { a: 0, b: 2, result: strings(&["1", "0", "0"]) }),
        entry("∇_{E2}E3 = E2", Published, Connection { a: 1, b: 2, result: strings(&["0", "1", "0"]) }),
        entry("Γ^z_xx = −e^{2z}", Computed, Christoffel { upper: 2, lower: [0, 0], value: s("-exp(2*z)") }),
        entry("R(E1,E2)E2 = −E1", Published, Curvature { a: 0, b: 1, c: 1, result: strings(&["-1", "0", "0"]) }),
        entry("R(E1,E3)E3 = −E1", Published, Curvature { a: 0, b: 2, c: 2, result: strings(&["-1", "0", "0"]) }),
        entry("R(E2,E1)E1 = −E2", Published, Curvature { a: 1, b: 0, c: 0, result: strings(&["0", "-1", "0"]) }),
        entry("R(E2,E3)E3 = −E2", Published, Curvature { a: 1, b: 2, c: 2, result: strings(&["0", "-1", "0"]) }),
        entry("R(E3,E1)E1 = −E3", Published, Curvature { a: 2, b: 0, c: 0, result: strings(&["0", "0", "-1"]) }),
        entry("R(E3,E2)E2 = −E3", Published, Curvature { a: 2, b: 1, c: 1, result: strings(&["0", "0", "-1"]) }),
    ];
    for i in 0..3 {
        expected.push(entry(&format!("Ric(E{0},E{0}) = −2", i + 1), Published, Ricci { a: i, b: i, value: s("-2") }));
    }
    expected.push(entry("scal = −6", Computed, ScalarCurvature { value: s("-6") }));
    for i in 0..3 {
        expected.push(entry(
            &format!("(£_V g)(E{0},E{0}) = 2e^z", i + 1),
            Published,
            LieDerivative { candidate: s("riemann"), a: i, b: i, value: s("2*exp(z)") },
        ));
    }
    expected.extend([
        entry("div V = 3e^z", Computed, Divergence { candidate: s("riemann"), value: s("3*exp(z)") }),
        entry("(α, β) = (1, 0), Kenmotsu", Published, AlphaBeta { alpha: s("1"), beta: s("0"), class: StructureClass::Kenmotsu }),
        entry("Ric(ξ, ξ) = −2", Computed, RicciXiXi { value: s("-2") }),
        entry(
            "λ + 1 leaves residual −1 at (E1,E2,E2,E1)",
            Computed,
            ResidualComponent { candidate: s("riemann-shifted"), component: vec![0, 1, 1, 0], value: s("-1") },
        ),
    ]);
    ManifoldSpecFile {
        name: s("paper-kenmotsu"),
        description: s("Kenmotsu manifold z > 1 in R^3 with g = e^{2z}(dx^2 + dy^2) + dz^2"),
        dimension: 3,
        coordinates: coordinates.clone(),
        domain: strings(&["z > 1"]),
        metric: diagonal(&strings(&["exp(2*z)", "exp(2*z)", "1"])),
        structure: Some(StructureSpec { phi: standard_phi(3), xi: strings(&xi), eta: strings(&xi), alpha: Some(s("1")), beta: Some(s("0")) }),
        frame: Some(vec![strings(&["exp(-z)", "0", "0"]), strings(&["0", "exp(-z)", "0"]), strings(&["0", "0", "1"])]),
        candidates: vec![
            candidate("riemann", &v, "2*exp(z) - 1", SolitonKind::Riemann, true, Expectation::Pass),
            candidate("ricci", &v, "exp(z) - 2", SolitonKind::Ricci, true, Expectation::Pass),
            candidate("yamabe", &v, "2*exp(z) - 6", SolitonKind::Yamabe, true, Expectation::Pass),
            candidate("riemann-shifted", &v, "2*exp(z)", SolitonKind::Riemann, true, Expectation::Fail),
            candidate("xi-riemann", &xi, "1/3", SolitonKind::Riemann, true, Expectation::Fail),
            candidate("xi-ricci", &xi, "-4/3", SolitonKind::Ricci, true, Expectation::Fail),
            candidate("xi-yamabe", &xi, "-14/3", SolitonKind::Yamabe, true, Expectation::Fail),
        ],
        sample_plan: Some(plan(&coordinates, (-1.0, 1.0, 5), (1.1, 2.0, 5))),
        expected,
    }
}

/// Flat `ℝ^m` with the constant cosymplectic structure.
pub fn flat_cosymplectic(m: usize) -> Result<ManifoldSpecFile, InputError> {
    use ExpectedValue::*;
    use Origin::*;
    if m < 3 || m.is_multiple_of(2) {
        return Err(InputError::Invalid(format!("flat cosymplectic space needs odd dimension ≥ 3, got {m}")));
    }
    let coordinates = pair_coordinates(m);
    let xi = reeb(m);
    let xi_ref: Vec<&str> = xi.iter().map(String::as_str).collect();
    let mut f = vec!["0"; m];
    f[m - 1] = "z^3 + 2*z + 1";
    let mut expected = vec![
        entry("(α, β) = (0, 0), cosymplectic", Elementary, AlphaBeta { alpha: s("0"), beta: s("0"), class: StructureClass::Cosymplectic }),
        entry("scal = 0", Elementary, ScalarCurvature { value: s("0") }),
        entry("Ric(ξ, ξ) = 0", Elementary, RicciXiXi { value: s("0") }),
        entry("div ξ = 0", Elementary, Divergence { candidate: s("xi-riemann"), value: s("0") }),
    ];
    for i in 0..m {
        expected.push(entry(&format!("Ric(E{0},E{0}) = 0", i + 1), Elementary, Ricci { a: i, b: i, value: s("0") }));
    }
    let horizontal = if m == 3 { 3 } else { 2 };
    Ok(ManifoldSpecFile {
        name: format!("flat-cosymplectic-{m}"),
        description: format!("flat R^{m} with the constant cosymplectic structure"),
        dimension: m,
        coordinates: coordinates.clone(),
        domain: Vec::new(),
        metric: diagonal(&vec![s("1"); m]),
        structure: Some(StructureSpec { phi: standard_phi(m), xi: xi.clone(), eta: xi.clone(), alpha: Some(s("0")), beta: Some(s("0")) }),
        frame: None,
        candidates: vec![
            candidate("xi-riemann", &xi_ref, "0", SolitonKind::Riemann, true, Expectation::Pass),
            candidate("xi-ricci", &xi_ref, "0", SolitonKind::Ricci, true, Expectation::Pass),
            candidate("xi-yamabe", &xi_ref, "0", SolitonKind::Yamabe, true, Expectation::Pass),
            candidate("fz-ricci", &f, "0", SolitonKind::Ricci, true, Expectation::Fail),
        ],
        sample_plan: Some(plan(&coordinates, (-1.0, 1.0, horizontal), (-1.0, 1.0, 3))),
        expected,
    })
}

/// `g = e^{2a z}(dx² + dy²) + dz²`, an `a`-Kenmotsu structure.
pub fn alpha_kenmotsu(a: f64) -> Result<ManifoldSpecFile, InputError> {
    use ExpectedValue::*;
    use Origin::*;
    if a == 0.0 || !a.is_finite() {
        return Err(InputError::Invalid(format!("alpha-kenmotsu needs a finite nonzero parameter, got {a}")));
    }
    let coordinates = strings(&["x", "y", "z"]);
    let an = num(a);
    let warp = format!("exp({} * z)", num(2.0 * a));
    let inv = format!("exp({} * z)", num(-a));
    let grow = format!("exp({an} * z)");
    let v = ["0".to_string(), "0".to_string(), grow.clone()];
    let v: Vec<&str> = v.iter().map(String::as_str).collect();
    let xi = ["0", "0", "1"];
    let class = if a == 1.0 { StructureClass::Kenmotsu } else { StructureClass::AlphaKenmotsu };
    Ok(ManifoldSpecFile {
        name: format!("alpha-kenmotsu-{a}"),
        description: format!("{a}-Kenmotsu warped product g = e^{{2az}}(dx^2 + dy^2) + dz^2 with a = {a}"),
        dimension: 3,
        coordinates: coordinates.clone(),
        domain: Vec::new(),
        metric: diagonal(&[warp.clone(), warp, s("1")]),
        structure: Some(StructureSpec { phi: standard_phi(3), xi: strings(&xi), eta: strings(&xi), alpha: Some(an.clone()), beta: Some(s("0")) }),
        frame: Some(vec![vec![inv.clone(), s("0"), s("0")], vec![s("0"), inv, s("0")], strings(&["0", "0", "1"])]),
        candidates: vec![
            candidate("riemann", &v, &format!("2 * {an} * {grow} - {}", num(a * a)), SolitonKind::Riemann, true, Expectation::Pass),
            candidate("ricci", &v, &format!("{an} * {grow} - {}", num(2.0 * a * a)), SolitonKind::Ricci, true, Expectation::Pass),
            candidate("xi-riemann", &xi, &num(4.0 * a / 3.0 - a * a), SolitonKind::Riemann, true, Expectation::Fail),
        ],
        sample_plan: Some(plan(&coordinates, (-1.0, 1.0, 3), (-1.0, 1.0, 3))),
        expected: vec![
            entry("(α, β) = (a, 0)", Computed, AlphaBeta { alpha: an.clone(), beta: s("0"), class }),
            entry("Ric(ξ, ξ) = −2a²", Computed, RicciXiXi { value: num(-2.0 * a * a) }),
            entry("scal = −6a²", Computed, ScalarCurvature { value: num(-6.0 * a * a) }),
        ],
    })
}

/// Five-dimensional Kenmotsu warped product; carries a Riemann and a Ricci
/// soliton sharing one potential.
pub fn kenmotsu_5() -> ManifoldSpecFile {
    use ExpectedValue::*;
    use Origin::*;
    let coordinates = pair_coordinates(5);
    let v = ["0", "0", "0", "0", "exp(z)"];
    let v3 = ["0", "0", "0", "0", "3*exp(z)"];
    let xi = reeb(5);
    let xi_ref: Vec<&str> = xi.iter().map(String::as_str).collect();
    let mut metric = vec![s("exp(2*z)"); 4];
    metric.push(s("1"));
    let mut frame: Vec<Vec<String>> = (0..4).map(|a| (0..5).map(|i| if a == i { s("exp(-z)") } else { s("0") }).collect()).collect();
    frame.push(xi.clone());
    ManifoldSpecFile {
        name: s("kenmotsu-5"),
        description: s("Kenmotsu warped product g = e^{2z}(dx1^2 + dy1^2 + dx2^2 + dy2^2) + dz^2"),
        dimension: 5,
        coordinates: coordinates.clone(),
        domain: Vec::new(),
        metric: diagonal(&metric),
        structure: Some(StructureSpec { phi: standard_phi(5), xi: xi.clone(), eta: xi.clone(), alpha: Some(s("1")), beta: Some(s("0")) }),
        frame: Some(frame),
        candidates: vec![
            candidate("riemann", &v, "2*exp(z) - 1", SolitonKind::Riemann, true, Expectation::Pass),
            candidate("ricci", &v, "exp(z) - 4", SolitonKind::Ricci, true, Expectation::Pass),
            candidate("transfer-ricci", &v3, "3*exp(z) - 4", SolitonKind::Ricci, true, Expectation::Pass),
            candidate("xi-riemann", &xi_ref, "3/5", SolitonKind::Riemann, true, Expectation::Fail),
        ],
        sample_plan: Some(plan(&coordinates, (-1.0, 1.0, 2), (-1.0, 1.0, 3))),
        expected: vec![
            entry("(α, β) = (1, 0), Kenmotsu", Computed, AlphaBeta { alpha: s("1"), beta: s("0"), class: StructureClass::Kenmotsu }),
            entry("Ric(ξ, ξ) = −4", Computed, RicciXiXi { value: s("-4") }),
            entry("scal = −20", Computed, ScalarCurvature { value: s("-20") }),
        ],
    }
}

/// The standard contact metric structure on `ℝ³`:
/// `η = ½(dz − y dx)`, `ξ = 2∂z`, `g = ¼(dx² + dy²) + η⊗η`.
/// `(α, β)` are not declared; they come from the fit.
pub fn sasakian_r3() -> ManifoldSpecFile {
    let coordinates = strings(&["x", "y", "z"]);
    let xi = ["0", "0", "2"];
    ManifoldSpecFile {
        name: s("sasakian-r3"),
        description: s("standard Sasakian structure on R^3: eta = (dz - y dx)/2, xi = 2 d/dz, g = (dx^2 + dy^2)/4 + eta^2"),
        dimension: 3,
        coordinates: coordinates.clone(),
        domain: Vec::new(),
        metric: vec![strings(&["(1 + y^2)/4", "0", "-y/4"]), strings(&["0", "1/4", "0"]), strings(&["-y/4", "0", "1/4"])],
        structure: Some(StructureSpec {
            phi: vec![strings(&["0", "1", "0"]), strings(&["-1", "0", "0"]), strings(&["0", "y", "0"])],
            xi: strings(&xi),
            eta: strings(&["-y/2", "0", "1/2"]),
            alpha: None,
            beta: None,
        }),
        frame: None,
        // ξ is Killing, so (ξ, scal) is a Yamabe soliton; scal = −2 comes from
        // the engine and is cross-checked by a finite-difference oracle.
        candidates: vec![candidate("xi-yamabe", &xi, "-2", SolitonKind::Yamabe, true, Expectation::Pass)],
        sample_plan: Some(plan(&coordinates, (-1.0, 1.0, 3), (-1.0, 1.0, 3))),
        expected: vec![entry(
            "(α, β) = (0, 1), Sasakian",
            Origin::Computed,
            ExpectedValue::AlphaBeta { alpha: s("0"), beta: s("1"), class: StructureClass::Sasakian },
        )],
    }
}

/// Look up a zoo entry by name.
pub fn spec(name: &str) -> Result<ManifoldSpecFile, InputError> {
    let unknown = || InputError::UnknownZoo(name.to_string());
    match name {
        "paper-kenmotsu" => Ok(paper_kenmotsu()),
        "kenmotsu-5" => Ok(kenmotsu_5()),
        "sasakian-r3" => Ok(sasakian_r3()),
        _ => {
            if let Some(m) = name.strip_prefix("flat-cosymplectic-") {
                flat_cosymplectic(m.parse().map_err(|_| unknown())?)
            } else if let Some(a) = name.strip_prefix("alpha-kenmotsu-") {
                alpha_kenmotsu(a.parse().map_err(|_| unknown())?)
            } else {
                Err(unknown())
            }
        }
    }
}

/// Build a session for a zoo entry. Entries whose `(α, β)` are not declared
/// are admitted only if the structure axioms and the fit pass.
pub fn load(name: &str, opts: &RunOptions) -> Result<Session, InputError> {
    let spec = spec(name)?;
    let self_validate = spec.structure.as_ref().is_some_and(|s| s.alpha.is_none() && s.beta.is_none());
    let session = Session::build(spec, opts)?;
    if self_validate {
        let failures: Vec<String> = contact::structure_checks(&session)
            .iter()
            .filter(|c| c.status.is_failure())
            .map(|c| format!("{} (max residual {:.3e})", c.name, c.max_residual.unwrap_or(f64::NAN)))
            .collect();
        if !failures.is_empty() {
            return Err(InputError::SelfValidation { name: name.to_string(), diagnostics: failures.join(", ") });
        }
    }
    Ok(session)
}
