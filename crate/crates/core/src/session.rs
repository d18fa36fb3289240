//! A parsed manifold description evaluated at every sample point.

use std::collections::HashSet;
use std::sync::Arc;

use crate::contact::{ContactPoint, SeededStructure};
use crate::error::InputError;
use crate::expr::{Chart, Point, ScalarExpr};
use crate::field::{SeededExpr, SeededTensor};
use crate::geometry::{GeometryError, PointGeometry};
use crate::jet::{Jet, JetSpace};
use crate::report::{SkippedPoint, Tolerances, DEFAULT_TOLERANCE};
use crate::sample::{AxisRange, SamplePlan};
use crate::spec_file::{Expectation, ManifoldSpecFile, SolitonKind};
use crate::tensor::{Scalar, Tensor, TensorError, Variance};

/// Jet order of the metric; everything derived from it loses orders.
pub const METRIC_ORDER: usize = 3;
/// Jet order of structure tensors, potentials and scalar functions.
pub const FIELD_ORDER: usize = 2;

/// `(φ, ξ, η)` with optional declared `(α, β)`, as symbolic fields.
#[derive(Debug, Clone)]
pub struct StructureFields {
    pub phi: Tensor<ScalarExpr>,
    pub xi: Tensor<ScalarExpr>,
    pub eta: Tensor<ScalarExpr>,
    pub alpha: Option<ScalarExpr>,
    pub beta: Option<ScalarExpr>,
}

#[derive(Debug, Clone)]
pub struct SolitonCandidate {
    pub name: String,
    pub potential: Tensor<ScalarExpr>,
    pub lambda: ScalarExpr,
    pub kind: SolitonKind,
    pub collinear: bool,
    pub expect: Expectation,
}

/// Overrides applied on top of a spec file's own sample plan.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub grid: Vec<AxisRange>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tolerance: DEFAULT_TOLERANCE, seed: None, samples: None, grid: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct PointData {
    /// Index into [`Session::sample_points`].
    pub index: usize,
    pub coords: Vec<f64>,
    pub geo: PointGeometry,
    /// `max |g_ij − g_ji|` of the metric as written.
    pub asymmetry: f64,
    pub contact: Option<ContactPoint>,
}

#[derive(Debug)]
pub struct Session {
    pub spec: ManifoldSpecFile,
    pub chart: Chart,
    pub metric: Tensor<ScalarExpr>,
    pub structure: Option<StructureFields>,
    pub frame: Option<Vec<Vec<ScalarExpr>>>,
    pub candidates: Vec<SolitonCandidate>,
    pub plan: SamplePlan,
    pub tolerance: f64,
    pub tol: Tolerances,
    pub space: Arc<JetSpace>,
    pub sample_points: Vec<Point>,
    pub points: Vec<PointData>,
    pub skipped: Vec<SkippedPoint>,
    seeded_candidates: Vec<(SeededTensor, SeededExpr)>,
}

fn parse_at(chart: &Chart, text: &str, location: impl Fn() -> String) -> Result<ScalarExpr, InputError> {
    chart.parse(text).map_err(|source| InputError::Expression { location: location(), source })
}

fn check_len(what: &str, got: usize, want: usize) -> Result<(), InputError> {
    if got != want {
        return Err(InputError::Invalid(format!("{what} has {got} entries, expected {want}")));
    }
    Ok(())
}

fn parse_matrix(chart: &Chart, rows: &[Vec<String>], what: &str, variance: Vec<Variance>) -> Result<Tensor<ScalarExpr>, InputError> {
    let m = chart.dim();
    check_len(what, rows.len(), m)?;
    let mut comps = Vec::with_capacity(m * m);
    for (i, row) in rows.iter().enumerate() {
        check_len(&format!("{what}[{i}]"), row.len(), m)?;
        for (j, text) in row.iter().enumerate() {
            comps.push(parse_at(chart, text, || format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(Tensor::from_components(m, variance, comps))
}

fn parse_vector(chart: &Chart, items: &[String], what: &str, variance: Variance) -> Result<Tensor<ScalarExpr>, InputError> {
    let m = chart.dim();
    check_len(what, items.len(), m)?;
    let comps = items.iter().enumerate().map(|(i, text)| parse_at(chart, text, || format!("{what}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::from_components(m, vec![variance], comps))
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Session {
    pub fn build(spec: ManifoldSpecFile, opts: &RunOptions) -> Result<Session, InputError> {
        let m = spec.coordinates.len();
        if spec.dimension != m {
            return Err(InputError::Invalid(format!("dimension is {} but {} coordinates are named", spec.dimension, m)));
        }
        if m < 2 {
            return Err(InputError::Invalid("dimension must be at least 2".into()));
        }
        let mut seen = HashSet::new();
        for name in &spec.coordinates {
            if !is_identifier(name) || name == "pi" {
                return Err(InputError::Invalid(format!("`{name}` is not a usable coordinate name")));
            }
            if !seen.insert(name) {
                return Err(InputError::Invalid(format!("coordinate `{name}` is listed twice")));
            }
        }
        let domain: Vec<&str> = spec.domain.iter().map(String::as_str).collect();
        let chart = Chart::new(spec.coordinates.clone(), &domain).map_err(|source| {
            let location = spec.domain.iter().position(|d| Chart::new(spec.coordinates.clone(), &[d.as_str()]).is_err()).unwrap_or(0);
            InputError::Expression { location: format!("domain[{location}]"), source }
        })?;

        let metric = parse_matrix(&chart, &spec.metric, "metric", vec![Variance::Covariant; 2])?;

        let structure = match &spec.structure {
            None => None,
            Some(s) => {
                if m.is_multiple_of(2) || m < 3 {
                    return Err(InputError::Invalid(format!("an almost contact structure needs odd dimension ≥ 3, got {m}")));
                }
                Some(StructureFields {
                    phi: parse_matrix(&chart, &s.phi, "structure.phi", vec![Variance::Contravariant, Variance::Covariant])?,
                    xi: parse_vector(&chart, &s.xi, "structure.xi", Variance::Contravariant)?,
                    eta: parse_vector(&chart, &s.eta, "structure.eta", Variance::Covariant)?,
                    alpha: s.alpha.as_deref().map(|t| parse_at(&chart, t, || "structure.alpha".into())).transpose()?,
                    beta: s.beta.as_deref().map(|t| parse_at(&chart, t, || "structure.beta".into())).transpose()?,
                })
            }
        };

        let frame = match &spec.frame {
            None => None,
            Some(rows) => {
                check_len("frame", rows.len(), m)?;
                let mut out = Vec::new();
                for (a, row) in rows.iter().enumerate() {
                    check_len(&format!("frame[{a}]"), row.len(), m)?;
                    out.push(row.iter().enumerate().map(|(i, t)| parse_at(&chart, t, || format!("frame[{a}][{i}]"))).collect::<Result<Vec<_>, _>>()?);
                }
                Some(out)
            }
        };

        let mut names = HashSet::new();
        let mut candidates = Vec::new();
        for (k, c) in spec.candidates.iter().enumerate() {
            if !names.insert(c.name.clone()) {
                return Err(InputError::Invalid(format!("candidate `{}` is listed twice", c.name)));
            }
            if c.collinear && structure.is_none() {
                return Err(InputError::Invalid(format!("candidate `{}` is marked collinear but no structure is given", c.name)));
            }
            candidates.push(SolitonCandidate {
                name: c.name.clone(),
                potential: parse_vector(&chart, &c.potential, &format!("candidates[{k}].potential"), Variance::Contravariant)?,
                lambda: parse_at(&chart, &c.lambda, || format!("candidates[{k}].lambda"))?,
                kind: c.kind,
                collinear: c.collinear,
                expect: c.expect,
            });
        }

        let mut plan = spec.sample_plan.clone().unwrap_or_else(|| SamplePlan::default_for(&chart));
        if let Some(seed) = opts.seed {
            plan.seed = seed;
        }
        if let Some(n) = opts.samples {
            plan.random = n;
        }
        plan.override_axes(opts.grid.clone());
        let sample_points = plan.points(&chart)?;

        let space = JetSpace::new(m, METRIC_ORDER);
        let seeded_metric = SeededTensor::new(&metric, &space, METRIC_ORDER);
        let seeded_frame: Option<Vec<Vec<SeededExpr>>> =
            frame.as_ref().map(|rows| rows.iter().map(|r| r.iter().map(|e| SeededExpr::new(e, &space, FIELD_ORDER)).collect()).collect());
        let seeded_structure = structure.as_ref().map(|s| SeededStructure::new(s, &space));
        let seeded_candidates = candidates
            .iter()
            .map(|c| (SeededTensor::new(&c.potential, &space, FIELD_ORDER), SeededExpr::new(&c.lambda, &space, FIELD_ORDER)))
            .collect();

        let mut points = Vec::new();
        let mut skipped = Vec::new();
        for (index, p) in sample_points.iter().enumerate() {
            let coords = p.coords();
            let evaluated = (|| -> Result<PointData, String> {
                let raw = seeded_metric.at(&space, coords).map_err(|e| e.to_string())?;
                let asymmetry = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| (raw.get(&[i, j]).value() - raw.get(&[j, i]).value()).abs())
                    .fold(0.0, f64::max);
                let g = Tensor::from_fn(m, vec![Variance::Covariant; 2], |idx| raw.get(idx).plus(raw.get(&[idx[1], idx[0]])).scaled(0.5));
                let frame_seed = match &seeded_frame {
                    None => None,
                    Some(rows) => Some(
                        rows.iter()
                            .map(|r| r.iter().map(|e| e.jet(&space, coords)).collect::<Result<Vec<Jet>, _>>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| e.to_string())?,
                    ),
                };
                let geo = PointGeometry::new(g, frame_seed).map_err(|e| match e {
                    GeometryError::Tensor(TensorError::NotPositiveDefinite) => "metric is not positive definite".to_string(),
                    other => other.to_string(),
                })?;
                let contact = match &seeded_structure {
                    None => None,
                    Some(s) => Some(ContactPoint::new(s, &geo, &space, coords).map_err(|e| e.to_string())?),
                };
                Ok(PointData { index, coords: coords.to_vec(), geo, asymmetry, contact })
            })();
            match evaluated {
                Ok(pd) => points.push(pd),
                Err(reason) => skipped.push(SkippedPoint { index, point: coords.to_vec(), reason }),
            }
        }

        Ok(Session {
            spec,
            chart,
            metric,
            structure,
            frame,
            candidates,
            plan,
            tolerance: opts.tolerance,
            tol: Tolerances::scaled(opts.tolerance),
            space,
            sample_points,
            points,
            skipped,
            seeded_candidates,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn candidate(&self, name: &str) -> Result<usize, InputError> {
        self.candidates.iter().position(|c| c.name == name).ok_or_else(|| InputError::UnknownCandidate(name.to_string()))
    }

    /// Potential and λ of candidate `k` as jets at a sample point.
    pub fn candidate_fields(&self, k: usize, pd: &PointData) -> Result<(Tensor<Jet>, Jet), String> {
        let (v, l) = &self.seeded_candidates[k];
        let v = v.at(&self.space, &pd.coords).map_err(|e| e.to_string())?;
        let l = l.jet(&self.space, &pd.coords).map_err(|e| e.to_string())?;
        Ok((v, l))
    }

    /// Evaluate an expression text at a point (expected values).
    pub fn evaluate_text(&self, text: &str, coords: &[f64]) -> Result<f64, String> {
        let e = self.chart.parse(text).map_err(|e| e.to_string())?;
        e.evaluate(coords).map_err(|e| e.to_string())
    }
}
