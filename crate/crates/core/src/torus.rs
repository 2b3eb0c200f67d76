//! Linear torus actions `V = ⊕ V_χ`.
//!
//! A point enters only through its support (which weights it has nonzero
//! components on) and the squared amplitudes `|v_χ|²`, so no complex
//! arithmetic is needed. Weights are covectors in `ℚⁿ`, the stability
//! parameter `τ` is a covector and `Q` is the invariant inner product on the
//! Lie algebra of the compact torus.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cone::{min_linear_on_sphere_cone, InnerProduct, KktCertificate, PolyhedralCone, Ray, SphereMinimum};
use crate::error::{Error, Result};
use crate::rational::{dot, frac, Extended, Rational, SignedSquare};

/// Enumerating strata visits every subset of the weights.
pub const MAX_STRATA_WEIGHTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub label: String,
    pub chi: Vec<Rational>,
}

impl Weight {
    pub fn new(label: impl Into<String>, chi: Vec<Rational>) -> Self {
        Self {
            label: label.into(),
            chi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    dim: usize,
    weights: Vec<Weight>,
}

impl WeightSystem {
    pub fn new(dim: usize, weights: Vec<Weight>) -> Result<Self> {
        for (i, w) in weights.iter().enumerate() {
            if w.chi.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: w.chi.len(),
                });
            }
            for other in &weights[..i] {
                if other.label == w.label {
                    return Err(Error::InvalidInput(format!("duplicate weight label `{}`", w.label)));
                }
                if other.chi == w.chi {
                    return Err(Error::InvalidInput(format!(
                        "weights `{}` and `{}` coincide",
                        other.label, w.label
                    )));
                }
            }
        }
        Ok(Self { dim, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Weight> {
        self.weights.iter().find(|w| w.label == label)
    }
}

/// Squared amplitudes `|v_χ|²` of a point, keyed by weight label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportVector {
    components: BTreeMap<String, Rational>,
}

impl SupportVector {
    pub fn new<I, S>(components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, amp) in components {
            let label = label.into();
            if amp.is_negative() {
                return Err(Error::InvalidInput(format!("negative amplitude for `{label}`")));
            }
            if map.insert(label.clone(), amp).is_some() {
                return Err(Error::InvalidInput(format!("duplicate component `{label}`")));
            }
        }
        Ok(Self { components: map })
    }

    /// Unit amplitude on each listed label.
    pub fn supported_on<S: AsRef<str>>(labels: &[S]) -> Self {
        Self {
            components: labels
                .iter()
                .map(|l| (l.as_ref().to_string(), Rational::one()))
                .collect(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn amplitude(&self, label: &str) -> Rational {
        self.components.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn components(&self) -> &BTreeMap<String, Rational> {
        &self.components
    }

    /// Labels with positive amplitude, sorted.
    pub fn support(&self) -> Vec<&str> {
        self.components
            .iter()
            .filter(|(_, a)| a.is_positive())
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

/// The optimal destabilizing ray of a non-semistable point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalClass {
    pub ray: Ray,
    pub lambda_inf: SignedSquare,
    pub certificate: KktCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Destabilization {
    /// `value` is the (nonnegative or infinite) minimum of the weight on the
    /// unit sphere.
    Semistable { value: Extended<SignedSquare> },
    Unstable(OptimalClass),
}

impl Destabilization {
    pub fn optimal(&self) -> Option<&OptimalClass> {
        match self {
            Destabilization::Unstable(o) => Some(o),
            Destabilization::Semistable { .. } => None,
        }
    }

    pub fn is_semistable(&self) -> bool {
        matches!(self, Destabilization::Semistable { .. })
    }
}

/// The reduced problem on `V(S)` for the centralizer of the optimal ray,
/// with the shifted stability parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedProblem {
    pub weights: WeightSystem,
    pub tau_prime: Vec<Rational>,
    pub fixed_ray: Ray,
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub optimal: OptimalClass,
    pub limit: SupportVector,
    pub induced: InducedProblem,
    pub induced_verdict: Destabilization,
    pub semistable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratumClass {
    Semistable,
    Unstable { ray: Ray, lambda_inf: SignedSquare },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub class: StratumClass,
    /// Each support is a list of weight labels in weight-system order.
    pub supports: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct TorusAction {
    weights: WeightSystem,
    tau: Vec<Rational>,
    metric: InnerProduct,
}

impl TorusAction {
    pub fn new(weights: WeightSystem, tau: Vec<Rational>, metric: InnerProduct) -> Result<Self> {
        let n = weights.dim();
        if tau.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: tau.len(),
            });
        }
        if metric.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: metric.dim(),
            });
        }
        Ok(Self { weights, tau, metric })
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn tau(&self) -> &[Rational] {
        &self.tau
    }

    pub fn metric(&self) -> &InnerProduct {
        &self.metric
    }

    fn supported_weights<'a>(&'a self, v: &'a SupportVector) -> Result<Vec<&'a Weight>> {
        for label in v.components().keys() {
            if self.weights.get(label).is_none() {
                return Err(Error::InvalidInput(format!("unknown weight label `{label}`")));
            }
        }
        Ok(self
            .weights
            .weights()
            .iter()
            .filter(|w| v.amplitude(&w.label).is_positive())
            .collect())
    }

    fn check_vector(&self, s: &[Rational]) -> Result<()> {
        if s.len() != self.weights.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.dim(),
                found: s.len(),
            });
        }
        Ok(())
    }

    /// `+∞` if some supported weight pairs positively with `s`, else `⟨τ, s⟩`.
    pub fn maximal_weight(&self, v: &SupportVector, s: &[Rational]) -> Result<Extended<Rational>> {
        self.check_vector(s)?;
        let divergent = self
            .supported_weights(v)?
            .iter()
            .any(|w| dot(&w.chi, s).is_positive());
        Ok(if divergent {
            Extended::Infinity
        } else {
            Extended::Finite(dot(&self.tau, s))
        })
    }

    /// The weight at time zero, `½ Σ ⟨χ, s⟩·|v_χ|² + ⟨τ, s⟩`.
    pub fn initial_pairing(&self, v: &SupportVector, s: &[Rational]) -> Result<Rational> {
        self.check_vector(s)?;
        let half = frac(1, 2);
        let moment: Rational = self
            .supported_weights(v)?
            .iter()
            .map(|w| dot(&w.chi, s) * v.amplitude(&w.label))
            .fold(Rational::zero(), |a, b| a + b);
        Ok(half * moment + dot(&self.tau, s))
    }

    /// The covector `½ Σ |v_χ|² χ + τ` whose pairing is [`Self::initial_pairing`].
    pub fn initial_covector(&self, v: &SupportVector) -> Result<Vec<Rational>> {
        let half = frac(1, 2);
        let mut c = self.tau.clone();
        for w in self.supported_weights(v)? {
            let amp = v.amplitude(&w.label) * &half;
            for (ci, x) in c.iter_mut().zip(&w.chi) {
                *ci += &amp * x;
            }
        }
        Ok(c)
    }

    /// `{ζ : ⟨χ, ζ⟩ ≤ 0 for every supported χ}`, where the weight is finite.
    pub fn finite_cone(&self, v: &SupportVector) -> Result<PolyhedralCone> {
        let rows = self.supported_weights(v)?.iter().map(|w| w.chi.clone()).collect();
        PolyhedralCone::new(self.weights.dim(), rows)
    }

    pub fn optimal_destabilizing(&self, v: &SupportVector) -> Result<Destabilization> {
        let cone = self.finite_cone(v)?;
        let SphereMinimum { ray, value, certificate } = min_linear_on_sphere_cone(&self.metric, &cone, &self.tau)?;
        Ok(match (ray, value, certificate) {
            (Some(ray), Extended::Finite(lambda_inf), Some(certificate)) => Destabilization::Unstable(OptimalClass {
                ray,
                lambda_inf,
                certificate,
            }),
            (_, value, _) => Destabilization::Semistable { value },
        })
    }

    /// `lim_{t→∞} e^{t·ray} v`: components pairing to zero with the ray are
    /// kept, those pairing negatively decay.
    pub fn limit_point(&self, v: &SupportVector, ray: &[Rational]) -> Result<SupportVector> {
        self.check_vector(ray)?;
        let mut kept = Vec::new();
        for w in self.supported_weights(v)? {
            let pairing = dot(&w.chi, ray);
            if pairing.is_positive() {
                return Err(Error::DivergentFlow(w.label.clone()));
            }
            if pairing.is_zero() {
                kept.push((w.label.clone(), v.amplitude(&w.label)));
            }
        }
        SupportVector::new(kept)
    }

    /// Weights fixed by the optimal ray `p` and the shifted parameter
    /// `τ′ = τ − (⟨τ, p⟩ / ‖p‖²_Q)·Q p`, which pairs to zero with `p`.
    pub fn induced_problem(&self, optimal: &OptimalClass) -> Result<InducedProblem> {
        let p = optimal.ray.direction();
        self.check_vector(p)?;
        if optimal.ray.is_zero() {
            return Err(Error::ZeroRay);
        }
        let coef = dot(&self.tau, p) / self.metric.norm_sq(p);
        let qp = self.metric.lower(p);
        let tau_prime: Vec<Rational> = self.tau.iter().zip(&qp).map(|(t, x)| t - &coef * x).collect();
        let retained = self
            .weights
            .weights()
            .iter()
            .filter(|w| dot(&w.chi, p).is_zero())
            .cloned()
            .collect();
        Ok(InducedProblem {
            weights: WeightSystem::new(self.weights.dim(), retained)?,
            tau_prime,
            fixed_ray: optimal.ray.clone(),
        })
    }

    /// Runs the destabilize / limit / reduce sequence and tests the limit
    /// for semistability in the induced problem.
    pub fn verify_limit_semistable(&self, v: &SupportVector) -> Result<LimitReport> {
        let Destabilization::Unstable(optimal) = self.optimal_destabilizing(v)? else {
            return Err(Error::NotDestabilizable);
        };
        let limit = self.limit_point(v, optimal.ray.direction())?;
        let induced = self.induced_problem(&optimal)?;
        let reduced = TorusAction::new(induced.weights.clone(), induced.tau_prime.clone(), self.metric.clone())?;
        let induced_verdict = reduced.optimal_destabilizing(&limit)?;
        let semistable = induced_verdict.is_semistable();
        Ok(LimitReport {
            optimal,
            limit,
            induced,
            induced_verdict,
            semistable,
        })
    }

    /// Groups all `2^|R|` supports by their optimal class.
    ///
    /// Strata are sorted by decreasing `λ_inf` (the semistable stratum first)
    /// and then by primitive ray; supports within a stratum follow the
    /// binary enumeration order of subsets.
    pub fn enumerate_strata(&self) -> Result<Vec<Stratum>> {
        let n_weights = self.weights.len();
        if n_weights > MAX_STRATA_WEIGHTS {
            return Err(Error::CapacityExceeded {
                what: "weight count",
                limit: MAX_STRATA_WEIGHTS,
                found: n_weights,
            });
        }
        let mut strata: Vec<Stratum> = Vec::new();
        for mask in 0u32..(1u32 << n_weights) {
            let labels: Vec<String> = self
                .weights
                .weights()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, w)| w.label.clone())
                .collect();
            let class = match self.optimal_destabilizing(&SupportVector::supported_on(&labels))? {
                Destabilization::Semistable { .. } => StratumClass::Semistable,
                Destabilization::Unstable(o) => StratumClass::Unstable {
                    ray: o.ray,
                    lambda_inf: o.lambda_inf,
                },
            };
            match strata.iter_mut().find(|s| s.class == class) {
                Some(s) => s.supports.push(labels),
                None => strata.push(Stratum {
                    class,
                    supports: vec![labels],
                }),
            }
        }
        strata.sort_by(|a, b| match (&a.class, &b.class) {
            (StratumClass::Semistable, StratumClass::Semistable) => std::cmp::Ordering::Equal,
            (StratumClass::Semistable, _) => std::cmp::Ordering::Less,
            (_, StratumClass::Semistable) => std::cmp::Ordering::Greater,
            (
                StratumClass::Unstable { ray: ra, lambda_inf: la },
                StratumClass::Unstable { ray: rb, lambda_inf: lb },
            ) => lb.cmp(la).then_with(|| ra.primitive().cmp(&rb.primitive())),
        });
        Ok(strata)
    }
}

/// Distinct eigenvalues in increasing order with the dimensions of the
/// associated increasing flag `V_1 ⊂ … ⊂ V_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianClass {
    pub eigenvalues: Vec<Rational>,
    pub flag_dims: Vec<usize>,
}

impl fmt::Display for HermitianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ev: Vec<String> = self.eigenvalues.iter().map(crate::rational::format_rational).collect();
        write!(f, "eigenvalues [{}], flag {:?}", ev.join(", "), self.flag_dims)
    }
}

/// For a torus element the coordinates are the eigenvalues.
pub fn hermitian_class(s: &[Rational]) -> HermitianClass {
    let mut sorted = s.to_vec();
    sorted.sort();
    let mut eigenvalues: Vec<Rational> = Vec::new();
    let mut flag_dims: Vec<usize> = Vec::new();
    for (i, x) in sorted.into_iter().enumerate() {
        if eigenvalues.last() == Some(&x) {
            *flag_dims.last_mut().expect("nonempty") = i + 1;
        } else {
            eigenvalues.push(x);
            flag_dims.push(i + 1);
        }
    }
    HermitianClass { eigenvalues, flag_dims }
}
