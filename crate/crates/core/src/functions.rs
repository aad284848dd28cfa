//! Target functions: the built-in registry, tabulated samples, domain
//! standardization and the discretized representative state.
//!
//! Positions in a [`FunctionSpec`] live in the original domain
//! `[x_min, x_max]`. A [`StandardizedFunction`] exposes the same function on
//! `[0, 1]` through `x' = x_min + x * L` and fixes the encoding, which decides
//! whether Grover-Rudolph angles integrate `f^2` (amplitude) or `f`
//! (probability).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::simulator::StateVector;

/// Grid size used for sampled suprema and second-difference estimates.
pub const ETA_GRID_POINTS: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Normal { mu: f64, sigma: f64 },
    Sine,
    /// `K - exp(|x|)/s` with `s = K * c`; zeros at `±ln(K s)`.
    BlackScholes { k: f64, c: f64 },
    /// `exp(x^{3/2})`, singular second log-derivative at 0.
    ExpX32,
    Beta { alpha: f64, beta: f64 },
    Uniform,
    /// Uniformly spaced samples over the domain, linearly interpolated.
    Tabulated { values: Vec<f64> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Normal { .. } => "normal",
            Family::Sine => "sine",
            Family::BlackScholes { .. } => "black_scholes",
            Family::ExpX32 => "exp_x32",
            Family::Beta { .. } => "beta",
            Family::Uniform => "uniform",
            Family::Tabulated { .. } => "tabulated",
        }
    }

    fn default_domain(&self) -> (f64, f64) {
        match self {
            Family::Sine => (0.0, 1.5 * PI),
            Family::BlackScholes { k, c } => {
                let edge = (k * k * c).ln();
                (-edge, edge)
            }
            _ => (0.0, 1.0),
        }
    }

    fn is_registry(&self) -> bool {
        !matches!(self, Family::Tabulated { .. })
    }
}

/// Slope behaviour on both sides of a zero or singular point.
///
/// `SameSlopeSign` needs one retained angle in the variational ansatz,
/// `OppositeSlopeSign` needs two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeKind {
    SameSlopeSign,
    OppositeSlopeSign,
}

impl SlopeKind {
    pub fn base_angles(self) -> usize {
        match self {
            SlopeKind::SameSlopeSign => 1,
            SlopeKind::OppositeSlopeSign => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// Amplitudes proportional to `f`; angles integrate `f^2`.
    #[default]
    Amplitude,
    /// Probabilities proportional to `f`; angles integrate `f`.
    Probability,
}

impl std::str::FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(Encoding::Amplitude),
            "probability" => Ok(Encoding::Probability),
            other => Err(Error::InvalidArgument(format!("unknown encoding {other:?}"))),
        }
    }
}

/// A zero or singular point in the original domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialPoint {
    pub position: f64,
    pub kind: SlopeKind,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    pub family: Family,
    pub domain: (f64, f64),
    pub zeros: Vec<f64>,
    pub singular_points: Vec<f64>,
    /// One entry per zero, then one per singular point.
    pub zero_kinds: Vec<SlopeKind>,
}

impl FunctionSpec {
    /// Builds a spec on `domain` with the family's known zeros and singular
    /// points that fall inside it.
    pub fn new(family: Family, domain: (f64, f64)) -> Result<Self> {
        let (zeros, singular_points, zero_kinds) = default_special_points(&family, domain);
        let spec = FunctionSpec {
            family,
            domain,
            zeros,
            singular_points,
            zero_kinds,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_default_domain(family: Family) -> Result<Self> {
        let domain = family.default_domain();
        Self::new(family, domain)
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::with_default_domain(Family::Normal { mu, sigma })
    }

    pub fn sine() -> Result<Self> {
        Self::with_default_domain(Family::Sine)
    }

    pub fn black_scholes(k: f64, c: f64) -> Result<Self> {
        Self::with_default_domain(Family::BlackScholes { k, c })
    }

    pub fn exp_x32() -> Result<Self> {
        Self::with_default_domain(Family::ExpX32)
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_default_domain(Family::Beta { alpha, beta })
    }

    pub fn uniform() -> Result<Self> {
        Self::with_default_domain(Family::Uniform)
    }

    pub fn tabulated(values: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        Self::new(Family::Tabulated { values }, domain)
    }

    /// Replaces the special points; `kinds` must match `zeros` followed by
    /// `singular_points`, or be empty for all-`SameSlopeSign`.
    pub fn with_special_points(
        mut self,
        zeros: Vec<f64>,
        singular_points: Vec<f64>,
        kinds: Vec<SlopeKind>,
    ) -> Result<Self> {
        let total = zeros.len() + singular_points.len();
        self.zero_kinds = if kinds.is_empty() {
            vec![SlopeKind::SameSlopeSign; total]
        } else {
            kinds
        };
        self.zeros = zeros;
        self.singular_points = singular_points;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!("invalid domain [{a}, {b}]")));
        }
        for &p in self.zeros.iter().chain(&self.singular_points) {
            if !(a <= p && p <= b) {
                return Err(Error::Domain(format!(
                    "special point {p} outside domain [{a}, {b}]"
                )));
            }
        }
        if self.zero_kinds.len() != self.zeros.len() + self.singular_points.len() {
            return Err(Error::InvalidArgument(format!(
                "{} zero kinds for {} special points",
                self.zero_kinds.len(),
                self.zeros.len() + self.singular_points.len()
            )));
        }
        match &self.family {
            Family::Normal { sigma, .. } if !(*sigma > 0.0) => {
                Err(Error::Domain(format!("normal sigma must be > 0, got {sigma}")))
            }
            Family::Beta { alpha, beta } if !(*alpha > 0.0 && *beta > 0.0) => Err(
                Error::Domain(format!("beta parameters must be > 0, got ({alpha}, {beta})")),
            ),
            Family::BlackScholes { k, c } if !(*k > 0.0 && *c > 0.0) => Err(Error::Domain(
                format!("black_scholes K and c must be > 0, got ({k}, {c})"),
            )),
            Family::Tabulated { values } if values.len() < 2 => Err(Error::Domain(
                "tabulated function needs at least two samples".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn length(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    /// Zeros followed by singular points, with their slope kinds.
    pub fn special_points(&self) -> Vec<SpecialPoint> {
        let zeros = self.zeros.iter().map(|&p| (p, true));
        let singular = self.singular_points.iter().map(|&p| (p, false));
        zeros
            .chain(singular)
            .zip(&self.zero_kinds)
            .map(|((position, is_zero), &kind)| SpecialPoint {
                position,
                kind,
                is_zero,
            })
            .collect()
    }

    /// `f(x)` in original coordinates.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            Family::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-0.5 * z * z).exp()
            }
            Family::Sine => x.sin(),
            Family::BlackScholes { k, c } => k - x.abs().exp() / (k * c),
            Family::ExpX32 => {
                if x < 0.0 {
                    f64::NAN
                } else {
                    (x * x.sqrt()).exp()
                }
            }
            Family::Beta { alpha, beta } => x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0),
            Family::Uniform => 1.0,
            Family::Tabulated { values } => {
                let (a, b) = self.domain;
                let last = values.len() - 1;
                let pos = ((x - a) / (b - a)).clamp(0.0, 1.0) * last as f64;
                let i = (pos.floor() as usize).min(last - 1);
                let t = pos - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// `d^2/dx^2 log|f(x)|` in original coordinates. Analytic for registry
    /// families, a central second difference for tabulated ones.
    pub fn d2_log(&self, x: f64) -> f64 {
        match &self.family {
            Family::Normal { sigma, .. } => -1.0 / (sigma * sigma),
            Family::Sine => {
                let s = x.sin();
                -1.0 / (s * s)
            }
            Family::BlackScholes { k, c } => {
                let s = k * c;
                let e = x.abs().exp() / s;
                let f = k - e;
                let df = if x < 0.0 { e } else { -e };
                -e / f - (df / f) * (df / f)
            }
            Family::ExpX32 => 0.75 / x.sqrt(),
            Family::Beta { alpha, beta } => {
                let term = |c: f64, d: f64| if c == 1.0 { 0.0 } else { (1.0 - c) / (d * d) };
                term(*alpha, x) + term(*beta, 1.0 - x)
            }
            Family::Uniform => 0.0,
            Family::Tabulated { .. } => {
                let (a, b) = self.domain;
                let h = (b - a) / ETA_GRID_POINTS as f64;
                let x = x.clamp(a + h, b - h);
                let g = |t: f64| self.eval(t).abs().ln();
                (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)
            }
        }
    }

    /// Parses the JSON document
    /// `{"family", "params", "domain", "zeros", "singular_points", "zero_kinds"}`.
    /// Omitted `domain`/`zeros`/`singular_points` fall back to the family
    /// defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FunctionDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FunctionDoc::from(self))?)
    }
}

fn default_special_points(
    family: &Family,
    (a, b): (f64, f64),
) -> (Vec<f64>, Vec<f64>, Vec<SlopeKind>) {
    let inside = |p: f64| a <= p && p <= b;
    let mut zeros = Vec::new();
    let mut singular = Vec::new();
    match family {
        Family::Sine => {
            let first = (a / PI).ceil() as i64;
            let last = (b / PI).floor() as i64;
            zeros.extend((first..=last).map(|j| j as f64 * PI));
        }
        Family::BlackScholes { k, c } => {
            let edge = (k * k * c).ln();
            zeros.extend([-edge, edge].into_iter().filter(|&p| inside(p)));
        }
        Family::ExpX32 if inside(0.0) => singular.push(0.0),
        Family::Beta { alpha, beta } => {
            if *alpha != 1.0 && inside(0.0) {
                singular.push(0.0);
            }
            if *beta != 1.0 && inside(1.0) {
                singular.push(1.0);
            }
        }
        _ => {}
    }
    let kinds = vec![SlopeKind::SameSlopeSign; zeros.len() + singular.len()];
    (zeros, singular, kinds)
}

#[derive(Debug, Serialize, Deserialize)]
struct FunctionDoc {
    family: String,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeros: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    singular_points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_kinds: Option<Vec<SlopeKind>>,
}

fn param(params: &Map<String, Value>, names: &[&str], default: Option<f64>) -> Result<f64> {
    for name in names {
        if let Some(v) = params.get(*name) {
            return v
                .as_f64()
                .ok_or_else(|| Error::InvalidArgument(format!("parameter {name} is not a number")));
        }
    }
    default.ok_or_else(|| Error::InvalidArgument(format!("missing parameter {}", names[0])))
}

/// Builds a registry family from its name and parameter map. Missing
/// parameters take the values used throughout the examples.
pub fn family_from_params(name: &str, params: &Map<String, Value>) -> Result<Family> {
    Ok(match name {
        "normal" => Family::Normal {
            mu: param(params, &["mu"], Some(0.5))?,
            sigma: param(params, &["sigma"], Some(1.0))?,
        },
        "sine" => Family::Sine,
        "black_scholes" => Family::BlackScholes {
            k: param(params, &["K", "k"], Some(45.0))?,
            c: param(params, &["c"], Some(3.0))?,
        },
        "exp_x32" => Family::ExpX32,
        "beta" => Family::Beta {
            alpha: param(params, &["alpha"], Some(2.0))?,
            beta: param(params, &["beta"], Some(2.0))?,
        },
        "uniform" => Family::Uniform,
        "tabulated" => {
            let values = params
                .get("values")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidArgument("tabulated needs params.values".into()))?
                .iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| Error::InvalidArgument("non-numeric sample".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Family::Tabulated { values }
        }
        other => return Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
    })
}

impl TryFrom<FunctionDoc> for FunctionSpec {
    type Error = Error;

    fn try_from(doc: FunctionDoc) -> Result<Self> {
        let family = family_from_params(&doc.family, &doc.params)?;
        let domain = doc
            .domain
            .map(|[a, b]| (a, b))
            .unwrap_or_else(|| family.default_domain());
        let mut spec = FunctionSpec::new(family, domain)?;
        if doc.zeros.is_some() || doc.singular_points.is_some() || doc.zero_kinds.is_some() {
            let zeros = doc.zeros.unwrap_or_else(|| spec.zeros.clone());
            let singular = doc
                .singular_points
                .unwrap_or_else(|| spec.singular_points.clone());
            spec = spec.with_special_points(zeros, singular, doc.zero_kinds.unwrap_or_default())?;
        }
        Ok(spec)
    }
}

impl From<&FunctionSpec> for FunctionDoc {
    fn from(spec: &FunctionSpec) -> Self {
        let mut params = Map::new();
        let mut put = |k: &str, v: f64| {
            params.insert(k.to_string(), Value::from(v));
        };
        match &spec.family {
            Family::Normal { mu, sigma } => {
                put("mu", *mu);
                put("sigma", *sigma);
            }
            Family::BlackScholes { k, c } => {
                put("K", *k);
                put("c", *c);
            }
            Family::Beta { alpha, beta } => {
                put("alpha", *alpha);
                put("beta", *beta);
            }
            Family::Tabulated { values } => {
                params.insert("values".into(), Value::from(values.clone()));
            }
            Family::Sine | Family::ExpX32 | Family::Uniform => {}
        }
        FunctionDoc {
            family: spec.family.name().to_string(),
            params,
            domain: Some([spec.domain.0, spec.domain.1]),
            zeros: Some(spec.zeros.clone()),
            singular_points: Some(spec.singular_points.clone()),
            zero_kinds: Some(spec.zero_kinds.clone()),
        }
    }
}

/// A function viewed on `[0, 1]` together with its encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardizedFunction {
    pub spec: FunctionSpec,
    pub encoding: Encoding,
}

impl StandardizedFunction {
    pub fn new(spec: FunctionSpec, encoding: Encoding) -> Self {
        Self { spec, encoding }
    }

    pub fn amplitude(spec: FunctionSpec) -> Self {
        Self::new(spec, Encoding::Amplitude)
    }

    pub fn length(&self) -> f64 {
        self.spec.length()
    }

    /// Maps `x in [0, 1]` to the original domain.
    pub fn to_original(&self, x: f64) -> f64 {
        self.spec.domain.0 + x * self.length()
    }

    pub fn to_standard(&self, x: f64) -> f64 {
        (x - self.spec.domain.0) / self.length()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.spec.eval(self.to_original(x))
    }

    /// The density integrated by the angle computation.
    pub fn density(&self, x: f64) -> f64 {
        let f = self.value(x);
        match self.encoding {
            Encoding::Amplitude => f * f,
            Encoding::Probability => f,
        }
    }

    /// `d^2/dx^2 log(density)` in standardized coordinates.
    pub fn d2_log_density(&self, x: f64) -> f64 {
        let scale = match self.encoding {
            Encoding::Amplitude => 2.0,
            Encoding::Probability => 1.0,
        };
        let l = self.length();
        scale * l * l * self.spec.d2_log(self.to_original(x))
    }

    /// Special points mapped to `[0, 1]`.
    pub fn standardized_special_points(&self) -> Vec<SpecialPoint> {
        self.spec
            .special_points()
            .into_iter()
            .map(|p| SpecialPoint {
                position: self.to_standard(p.position),
                ..p
            })
            .collect()
    }
}

/// Builds the normalized representative state on the grid
/// `x_min + j * (x_max - x_min) / (2^n - 1)`.
///
/// Amplitude encoding normalizes `f` itself, probability encoding
/// normalizes `sqrt(f)`.
pub fn discretize(func: &StandardizedFunction, n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let size = 1usize << n;
    let (a, b) = func.spec.domain;
    let step = (b - a) / (size - 1) as f64;
    let mut amps = Vec::with_capacity(size);
    for j in 0..size {
        // pin the last point to x_max exactly
        let x = if j == size - 1 { b } else { a + j as f64 * step };
        let f = func.spec.eval(x);
        if !f.is_finite() {
            return Err(Error::Domain(format!("f({x}) = {f} is not finite")));
        }
        let amp = match func.encoding {
            Encoding::Amplitude => f,
            Encoding::Probability => {
                if f < 0.0 {
                    return Err(Error::Domain(format!(
                        "probability encoding needs f >= 0, f({x}) = {f}"
                    )));
                }
                f.sqrt()
            }
        };
        amps.push(amp);
    }
    let norm = amps.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateFunction);
    }
    amps.iter_mut().for_each(|v| *v /= norm);
    StateVector::from_amplitudes(amps)
}

/// Supremum of `|d^2 log density|` over the standardized domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaBound {
    pub eta: f64,
    /// True when computed by finite differences rather than an analytic
    /// second derivative.
    pub estimated: bool,
}

/// Computes the smoothness constant of the density.
///
/// Registry families sample their analytic second derivative on
/// [`ETA_GRID_POINTS`]` + 1` points including both endpoints; tabulated
/// functions use [`eta_estimate`].
pub fn eta_bound(func: &StandardizedFunction) -> Result<EtaBound> {
    let special = func.spec.special_points();
    if !special.is_empty() {
        return Err(Error::Singularity {
            points: special.iter().map(|p| p.position).collect(),
        });
    }
    if !func.spec.family.is_registry() {
        return Ok(EtaBound {
            eta: eta_estimate(func)?,
            estimated: true,
        });
    }
    let mut eta = 0.0f64;
    for i in 0..=ETA_GRID_POINTS {
        let x = i as f64 / ETA_GRID_POINTS as f64;
        let d2 = func.d2_log_density(x).abs();
        if !d2.is_finite() {
            return Err(Error::Singularity {
                points: vec![func.to_original(x)],
            });
        }
        eta = eta.max(d2);
    }
    Ok(EtaBound {
        eta,
        estimated: false,
    })
}

/// Maximum over a uniform grid of `|second difference of log(density)|`,
/// independent of any analytic derivative.
pub fn eta_estimate(func: &StandardizedFunction) -> Result<f64> {
    let h = 1.0 / ETA_GRID_POINTS as f64;
    let logd = |x: f64| func.density(x).ln();
    let mut eta = 0.0f64;
    let mut prev = logd(0.0);
    let mut cur = logd(h);
    for i in 1..ETA_GRID_POINTS {
        let next = logd((i + 1) as f64 * h);
        let d2 = ((next - 2.0 * cur + prev) / (h * h)).abs();
        if !d2.is_finite() {
            return Err(Error::Singularity {
                points: vec![func.to_original(i as f64 * h)],
            });
        }
        eta = eta.max(d2);
        prev = cur;
        cur = next;
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_discretizes_flat() {
        let f = StandardizedFunction::amplitude(FunctionSpec::uniform().unwrap());
        let s1 = discretize(&f, 1).unwrap();
        for a in s1.amplitudes() {
            assert_abs_diff_eq!(*a, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        }
        let s3 = discretize(&f, 3).unwrap();
        for a in s3.amplitudes() {
            assert_abs_diff_eq!(*a, 2f64.powf(-1.5), epsilon = 1e-15);
        }
    }

    #[test]
    fn normal_discretization_matches_direct_grid() {
        let f = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, 1.0).unwrap());
        let s = discretize(&f, 8).unwrap();
        // direct evaluation with the grid built from integer ratios
        let raw: Vec<f64> = (0..256)
            .map(|j| {
                let x = j as f64 / 255.0;
                (-(x - 0.5) * (x - 0.5) / 2.0).exp()
            })
            .collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (a, r) in s.amplitudes().iter().zip(&raw) {
            assert_abs_diff_eq!(*a, r / norm, epsilon = 1e-14);
        }
    }

    #[test]
    fn discretize_errors() {
        let zero = FunctionSpec::tabulated(vec![0.0, 0.0, 0.0], (0.0, 1.0)).unwrap();
        assert!(matches!(
            discretize(&StandardizedFunction::amplitude(zero), 3),
            Err(Error::DegenerateFunction)
        ));
        let blowup = FunctionSpec::beta(0.5, 1.0).unwrap();
        assert!(matches!(
            discretize(&StandardizedFunction::amplitude(blowup), 3),
            Err(Error::Domain(_))
        ));
        let sine = FunctionSpec::sine().unwrap();
        assert!(matches!(
            discretize(&StandardizedFunction::new(sine, Encoding::Probability), 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn table_one_etas() {
        for (sigma, eta) in [(1.0, 2.00), (0.6, 5.56), (0.4, 12.50), (0.3, 22.22)] {
            let f = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, sigma).unwrap());
            let got = eta_bound(&f).unwrap();
            assert!(!got.estimated);
            assert!((got.eta - eta).abs() < 0.005, "sigma {sigma}: {}", got.eta);
        }
        let u = StandardizedFunction::amplitude(FunctionSpec::uniform().unwrap());
        assert_eq!(eta_bound(&u).unwrap().eta, 0.0);
    }

    #[test]
    fn eta_scales_with_domain_and_matches_estimator() {
        for (sigma, (a, b)) in [(1.0, (0.0, 1.0)), (0.7, (-1.0, 2.0)), (2.5, (-3.0, 4.0))] {
            let spec = FunctionSpec::new(Family::Normal { mu: 0.2, sigma }, (a, b)).unwrap();
            let f = StandardizedFunction::amplitude(spec);
            let l = b - a;
            let analytic = eta_bound(&f).unwrap().eta;
            assert_abs_diff_eq!(analytic, 2.0 * l * l / (sigma * sigma), epsilon = 1e-9);
            let est = eta_estimate(&f).unwrap();
            assert!((est - analytic).abs() / analytic < 0.01);
        }
    }

    #[test]
    fn eta_rejects_special_points() {
        let f = StandardizedFunction::amplitude(FunctionSpec::exp_x32().unwrap());
        assert!(matches!(eta_bound(&f), Err(Error::Singularity { .. })));
    }

    #[test]
    fn tabulated_eta_is_flagged() {
        let values: Vec<f64> = (0..=64).map(|i| 1.0 + 0.5 * (i as f64 / 64.0)).collect();
        let f = StandardizedFunction::amplitude(FunctionSpec::tabulated(values, (0.0, 1.0)).unwrap());
        let eta = eta_bound(&f).unwrap();
        assert!(eta.estimated);
        assert!(eta.eta.is_finite());
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let spec = FunctionSpec::from_json(
            r#"{"family": "black_scholes", "params": {"K": 45, "c": 3}}"#,
        )
        .unwrap();
        let edge = (45.0f64 * 135.0).ln();
        assert_abs_diff_eq!(spec.domain.1, edge, epsilon = 1e-12);
        assert_eq!(spec.zeros.len(), 2);
        let back = FunctionSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back, spec);

        let custom = FunctionSpec::from_json(
            r#"{"family": "sine", "domain": [0, 3], "zeros": [0], "singular_points": [],
                "zero_kinds": ["opposite_slope_sign"]}"#,
        )
        .unwrap();
        assert_eq!(custom.zero_kinds, vec![SlopeKind::OppositeSlopeSign]);

        let bad = FunctionSpec::from_json(r#"{"family": "normal", "params": {"sigma": -1}}"#);
        assert!(matches!(bad, Err(Error::Domain(_))));
        let outside = FunctionSpec::from_json(r#"{"family": "uniform", "zeros": [2.0]}"#);
        assert!(matches!(outside, Err(Error::Domain(_))));
    }

    #[test]
    fn registry_special_points() {
        let sine = FunctionSpec::sine().unwrap();
        assert_eq!(sine.zeros.len(), 2);
        assert_abs_diff_eq!(sine.zeros[1], PI, epsilon = 1e-15);
        assert_eq!(FunctionSpec::beta(2.0, 1.0).unwrap().singular_points, vec![0.0]);
        assert!(FunctionSpec::normal(0.5, 0.3).unwrap().special_points().is_empty());
    }
}
