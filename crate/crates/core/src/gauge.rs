//! Harder–Narasimhan theory for bundles and holomorphic pairs `(E, φ)` in
//! slope-data form.
//!
//! A bundle is modeled by a finite [`SubobjectLattice`] of declared
//! subobjects with rank, degree and whether `im φ` lies in them. Filtration
//! types are sequences of quotient `(rank, degree)` steps, and a Hermitian
//! endomorphism with constant eigenvalues adapted to a filtration is its
//! eigenvalue vector `λ_1 ≤ ⋯ ≤ λ_k`, normed by `‖s‖² = Σ r_i λ_i²`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::cone::{min_linear_on_sphere_cone, InnerProduct, KktCertificate, PolyhedralCone, Ray, SphereMinimum};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Extended, Rational, SignedSquare};

/// Exhaustive chain enumeration is limited to lattices of this size.
pub const MAX_LATTICE_NODES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub rank: u32,
    pub degree: i64,
    pub contains_phi: bool,
}

impl Node {
    pub fn new(label: impl Into<String>, rank: u32, degree: i64, contains_phi: bool) -> Self {
        Self {
            label: label.into(),
            rank,
            degree,
            contains_phi,
        }
    }
}

/// One quotient `E_i / E_{i−1}` of a filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub rank: u32,
    pub degree: i64,
}

impl Step {
    pub fn new(rank: u32, degree: i64) -> Self {
        Self { rank, degree }
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree.into(), i64::from(self.rank).into())
    }
}

/// Strictly decreasing slopes, skipping the comparison of step `i` with
/// step `i + 1` for `exempt = Some(i)` (0-based).
fn decreasing_except(steps: &[Step], exempt: Option<usize>) -> bool {
    steps
        .windows(2)
        .enumerate()
        .all(|(i, w)| exempt == Some(i) || w[0].slope() > w[1].slope())
}

fn total(steps: &[Step]) -> (i64, i64) {
    steps
        .iter()
        .fold((0, 0), |(r, d), s| (r + i64::from(s.rank), d + s.degree))
}

/// A filtration type with strictly decreasing slopes, up to the exemption
/// of [`HnType::with_pair_quotient`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HnType {
    steps: Vec<Step>,
}

impl HnType {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        Self::validated(steps, None)
    }

    /// Type of a pair filtration whose `(m+1)`-th quotient carries `φ̄`
    /// (case (a)): that quotient is exempt from the comparison with the
    /// `(m+2)`-th slope.
    pub fn with_pair_quotient(steps: Vec<Step>, m: usize) -> Result<Self> {
        Self::validated(steps, Some(m))
    }

    fn validated(steps: Vec<Step>, exempt: Option<usize>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidInput("filtration type without steps".into()));
        }
        if steps.iter().any(|s| s.rank == 0) {
            return Err(Error::InvalidInput("filtration step of rank 0".into()));
        }
        if !decreasing_except(&steps, exempt) {
            return Err(Error::InvalidInput("slopes must be strictly decreasing".into()));
        }
        Ok(Self { steps })
    }

    pub fn from_pairs(pairs: &[(u32, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(r, d)| Step::new(r, d)).collect())
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rank(&self) -> i64 {
        total(&self.steps).0
    }

    pub fn degree(&self) -> i64 {
        total(&self.steps).1
    }

    /// `μ(E) = deg E / rk E`.
    pub fn slope(&self) -> Rational {
        Rational::new(self.degree().into(), self.rank().into())
    }
}

impl fmt::Display for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| format!("({}, {})", s.rank, s.degree)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Finite poset of subobjects `0 ⊆ … ⊆ E` with rank, degree and φ-flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectLattice {
    nodes: Vec<Node>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
    top: usize,
}

impl SubobjectLattice {
    /// `order` lists pairs `(a, b)` meaning `a ⊆ b`; the reflexive and
    /// transitive closure is taken. A zero node (rank 0) is added if none is
    /// declared; flagging it with `contains_phi` encodes `φ = 0`. The top is
    /// the unique maximal node.
    pub fn new(mut nodes: Vec<Node>, order: &[(String, String)]) -> Result<Self> {
        let bad = |msg: String| Error::NotALattice(msg);
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|o| o.label == n.label) {
                return Err(bad(format!("duplicate label `{}`", n.label)));
            }
        }
        let zeros: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].rank == 0).collect();
        let bottom = match zeros.as_slice() {
            [] => {
                nodes.push(Node::new("0", 0, 0, false));
                nodes.len() - 1
            }
            [b] => {
                if nodes[*b].degree != 0 {
                    return Err(bad(format!("zero node `{}` has nonzero degree", nodes[*b].label)));
                }
                *b
            }
            _ => return Err(bad("more than one node of rank 0".into())),
        };
        let n = nodes.len();
        let index = |label: &str| -> Result<usize> {
            nodes
                .iter()
                .position(|x| x.label == label)
                .ok_or_else(|| bad(format!("unknown label `{label}` in order")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        leq[bottom].fill(true);
        for (a, b) in order {
            leq[index(a)?][index(b)?] = true;
        }
        for k in 0..n {
            let through = leq[k].clone();
            for row in leq.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&through) {
                    *x |= y;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(bad(format!(
                        "`{}` and `{}` contain each other",
                        nodes[i].label, nodes[j].label
                    )));
                }
            }
        }
        let maximal: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| j == i || !leq[i][j])).collect();
        let top = match maximal.as_slice() {
            [t] if *t != bottom => *t,
            [_] => return Err(bad("the lattice has no nonzero node".into())),
            _ => return Err(bad("no unique top node".into())),
        };
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] {
                    if nodes[i].rank >= nodes[j].rank {
                        return Err(bad(format!(
                            "rank does not increase from `{}` to `{}`",
                            nodes[i].label, nodes[j].label
                        )));
                    }
                    if nodes[i].contains_phi && !nodes[j].contains_phi && j != top {
                        return Err(bad(format!(
                            "`{}` contains im φ but its supobject `{}` does not",
                            nodes[i].label, nodes[j].label
                        )));
                    }
                }
            }
        }
        Ok(Self { nodes, leq, bottom, top })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.nodes[i].label
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// `im φ ⊆ node`. The top always contains it.
    pub fn contains_phi(&self, i: usize) -> bool {
        i == self.top || self.nodes[i].contains_phi
    }

    /// `φ = 0` is encoded by flagging the zero node.
    pub fn phi_is_zero(&self) -> bool {
        self.nodes[self.bottom].contains_phi
    }

    pub fn rank(&self) -> i64 {
        i64::from(self.nodes[self.top].rank)
    }

    pub fn degree(&self) -> i64 {
        self.nodes[self.top].degree
    }

    /// `μ(E)`.
    pub fn slope(&self) -> Rational {
        Rational::new(self.degree().into(), self.rank().into())
    }

    /// The quotient `b / a` for `a ⊊ b`.
    pub fn quotient(&self, a: usize, b: usize) -> Step {
        Step::new(
            self.nodes[b].rank - self.nodes[a].rank,
            self.nodes[b].degree - self.nodes[a].degree,
        )
    }

    /// Quotient steps of a chain given by node indices from bottom to top.
    pub fn steps(&self, chain: &[usize]) -> Vec<Step> {
        chain.windows(2).map(|w| self.quotient(w[0], w[1])).collect()
    }

    /// Semistability of `b / a` within the lattice: no intermediate node
    /// gives a subquotient of larger slope.
    pub fn interval_semistable(&self, a: usize, b: usize) -> bool {
        let slope = self.quotient(a, b).slope();
        (0..self.len())
            .filter(|&x| self.lt(a, x) && self.lt(x, b))
            .all(|x| self.quotient(a, x).slope() <= slope)
    }

    /// τ-semistability of the pair `(b / a, φ̄)` for `im φ ⊆ b`, `im φ ⊄ a`.
    fn interval_pair_semistable(&self, a: usize, b: usize, tau: &Rational) -> bool {
        (0..self.len())
            .filter(|&x| self.lt(a, x) && self.lt(x, b))
            .all(|x| {
                self.quotient(a, x).slope() <= *tau
                    && (!self.contains_phi(x) || self.quotient(x, b).slope() >= *tau)
            })
    }

    /// Every strict chain `0 = c_0 ⊊ c_1 ⊊ ⋯ ⊊ c_k = E`, as node indices.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![self.bottom];
        self.extend_chains(&mut path, &mut out, false);
        out
    }

    /// Chains in which each step is a covering relation.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![self.bottom];
        self.extend_chains(&mut path, &mut out, true);
        out
    }

    fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.len()).any(|x| self.lt(a, x) && self.lt(x, b))
    }

    fn extend_chains(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, covers_only: bool) {
        let cur = *path.last().expect("nonempty");
        if cur == self.top {
            out.push(path.clone());
            return;
        }
        for next in 0..self.len() {
            let ok = if covers_only {
                self.covers(cur, next)
            } else {
                self.lt(cur, next)
            };
            if ok {
                path.push(next);
                self.extend_chains(path, out, covers_only);
                path.pop();
            }
        }
    }

    fn labels(&self, chain: &[usize]) -> Vec<String> {
        chain[1..].iter().map(|&i| self.nodes[i].label.clone()).collect()
    }

    fn check_capacity(&self) -> Result<()> {
        if self.len() > MAX_LATTICE_NODES {
            return Err(Error::CapacityExceeded {
                what: "lattice node count",
                limit: MAX_LATTICE_NODES,
                found: self.len(),
            });
        }
        Ok(())
    }

    /// Whether a chain has strictly decreasing slopes and semistable
    /// quotients.
    pub fn is_hn_chain(&self, chain: &[usize]) -> bool {
        let steps = self.steps(chain);
        steps.windows(2).all(|w| w[0].slope() > w[1].slope())
            && chain.windows(2).all(|w| self.interval_semistable(w[0], w[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnFiltration {
    /// Labels of `E_1 ⊊ ⋯ ⊊ E_k = E`.
    pub chain: Vec<String>,
    pub hn_type: HnType,
}

impl HnFiltration {
    pub fn is_trivial(&self) -> bool {
        self.hn_type.len() == 1
    }
}

/// Greedy maximal destabilizing subobjects: from the current `E_i`, take
/// the node above it whose quotient has the largest slope, then the
/// largest rank. The result is checked against exhaustive enumeration for
/// lattices of at most [`MAX_LATTICE_NODES`] nodes.
pub fn hn_filtration(lattice: &SubobjectLattice) -> Result<HnFiltration> {
    let mut chain = vec![lattice.bottom()];
    let mut cur = lattice.bottom();
    while cur != lattice.top() {
        let mut best: Vec<usize> = Vec::new();
        let mut best_key: Option<(Rational, u32)> = None;
        for x in (0..lattice.len()).filter(|&x| lattice.lt(cur, x)) {
            let step = lattice.quotient(cur, x);
            let key = (step.slope(), step.rank);
            match best_key.as_ref().map(|b| key.cmp(b)) {
                None | Some(Ordering::Greater) => {
                    best_key = Some(key);
                    best = vec![x];
                }
                Some(Ordering::Equal) => best.push(x),
                Some(Ordering::Less) => {}
            }
        }
        if best.len() != 1 {
            let names: Vec<&str> = best.iter().map(|&i| lattice.label(i)).collect();
            return Err(Error::AmbiguousLattice(format!(
                "maximal destabilizing subobject is not unique: {}",
                names.join(", ")
            )));
        }
        cur = best[0];
        chain.push(cur);
    }
    if !lattice.is_hn_chain(&chain) {
        return Err(Error::AmbiguousLattice(
            "greedy filtration violates the slope conditions".into(),
        ));
    }
    if lattice.len() <= MAX_LATTICE_NODES {
        let brute = hn_chains_brute_force(lattice)?;
        let labels = lattice.labels(&chain);
        if brute != [labels.clone()] {
            return Err(Error::AmbiguousLattice(format!(
                "{} chains satisfy the filtration conditions",
                brute.len()
            )));
        }
    }
    let hn_type = HnType::new(lattice.steps(&chain))?;
    Ok(HnFiltration {
        chain: lattice.labels(&chain),
        hn_type,
    })
}

/// Every chain with strictly decreasing slopes and semistable quotients.
pub fn hn_chains_brute_force(lattice: &SubobjectLattice) -> Result<Vec<Vec<String>>> {
    lattice.check_capacity()?;
    Ok(lattice
        .chains()
        .iter()
        .filter(|c| lattice.is_hn_chain(c))
        .map(|c| lattice.labels(c))
        .collect())
}

fn check_nondecreasing(lam: &[Rational]) -> Result<()> {
    if lam.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("eigenvalues must be nondecreasing".into()));
    }
    Ok(())
}

fn linear_weight(steps: &[Step], kappa: &Rational, lam: &[Rational]) -> Rational {
    steps
        .iter()
        .zip(lam)
        .map(|(s, l)| (int(s.degree) - kappa * int(i64::from(s.rank))) * l)
        .fold(Rational::zero(), |a, b| a + b)
}

/// `λ^s(E) = Σ (d_i − μ(E)·r_i)·λ_i` for `s` with eigenvalues `λ` on the
/// filtration of the given type.
pub fn bundle_max_weight(hn_type: &HnType, lam: &[Rational]) -> Result<Rational> {
    if lam.len() != hn_type.len() {
        return Err(Error::LengthMismatch {
            expected: hn_type.len(),
            found: lam.len(),
        });
    }
    check_nondecreasing(lam)?;
    Ok(linear_weight(hn_type.steps(), &hn_type.slope(), lam))
}

/// Closed-form destabilizer, cross-checked against the cone solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeOptimum {
    /// Eigenvalue vector in the metric `diag(r_i)`.
    pub ray: Ray,
    pub lambda_inf: SignedSquare,
    /// Certificate of the solver run that confirmed the closed form.
    pub certificate: KktCertificate,
}

fn rank_metric(steps: &[Step]) -> Result<InnerProduct> {
    let weights: Vec<Rational> = steps.iter().map(|s| int(i64::from(s.rank))).collect();
    InnerProduct::diagonal(&weights)
}

/// `{λ_1 ≤ ⋯ ≤ λ_k}` plus `λ_ℓ ≤ 0` when `phi_step = Some(ℓ)`.
/// The `λ_ℓ ≤ 0` row, when present, is the last constraint.
fn eigenvalue_cone(k: usize, phi_step: Option<usize>) -> Result<PolyhedralCone> {
    let mut rows = Vec::with_capacity(k);
    for i in 0..k.saturating_sub(1) {
        let mut a = vec![Rational::zero(); k];
        a[i] = int(1);
        a[i + 1] = int(-1);
        rows.push(a);
    }
    if let Some(l) = phi_step {
        let mut a = vec![Rational::zero(); k];
        a[l - 1] = int(1);
        rows.push(a);
    }
    PolyhedralCone::new(k, rows)
}

fn solve_chain(steps: &[Step], kappa: &Rational, phi_step: Option<usize>) -> Result<(InnerProduct, SphereMinimum)> {
    let metric = rank_metric(steps)?;
    let cone = eigenvalue_cone(steps.len(), phi_step)?;
    let c: Vec<Rational> = steps
        .iter()
        .map(|s| int(s.degree) - kappa * int(i64::from(s.rank)))
        .collect();
    let min = min_linear_on_sphere_cone(&metric, &cone, &c)?;
    Ok((metric, min))
}

fn confirm(
    closed_form: Vec<Rational>,
    metric: &InnerProduct,
    solved: SphereMinimum,
) -> Result<GaugeOptimum> {
    let ray = Ray::new(closed_form, metric)?;
    let lambda_inf = SignedSquare::neg_sqrt(ray.norm_sq().clone());
    let (Some(solver_ray), Some(certificate)) = (solved.ray, solved.certificate) else {
        return Err(Error::VerificationFailed("cone solver found no destabilizing ray".into()));
    };
    if solver_ray.direction() != ray.direction() || solved.value != Extended::Finite(lambda_inf.clone()) {
        return Err(Error::VerificationFailed(format!(
            "closed form {ray} differs from solver ray {solver_ray}"
        )));
    }
    Ok(GaugeOptimum {
        ray,
        lambda_inf,
        certificate,
    })
}

/// `p_i = μ(E) − μ_i`, `λ_inf² = Σ r_i (μ_i − μ(E))²`.
pub fn bundle_optimal(hn_type: &HnType) -> Result<GaugeOptimum> {
    if hn_type.len() < 2 {
        return Err(Error::SemistableType);
    }
    let mu = hn_type.slope();
    let closed_form: Vec<Rational> = hn_type.steps().iter().map(|s| &mu - s.slope()).collect();
    let (metric, solved) = solve_chain(hn_type.steps(), &mu, None)?;
    confirm(closed_form, &metric, solved)
}

pub fn pair_semistable(lattice: &SubobjectLattice, tau: &Rational) -> Result<bool> {
    let mu = lattice.slope();
    if mu > *tau {
        return Err(Error::TopologicalConditionViolated {
            slope: format_rational(&mu),
            tau: format_rational(tau),
        });
    }
    // With φ = 0 the central direction destabilizes unless μ(E) = τ.
    if lattice.phi_is_zero() && mu < *tau {
        return Ok(false);
    }
    let proper = (0..lattice.len()).filter(|&f| f != lattice.bottom() && f != lattice.top());
    for f in proper {
        let node = &lattice.nodes()[f];
        let slope = Rational::new(node.degree.into(), i64::from(node.rank).into());
        if slope > *tau {
            return Ok(false);
        }
        if lattice.contains_phi(f) && lattice.quotient(f, lattice.top()).slope() < *tau {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which clause of the pair filtration conditions holds at the breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairCase {
    /// `im φ ⊄ E_m`, `τ > μ_{m+1}`, `(E_{m+1}/E_m, φ̄)` τ-semistable.
    A,
    /// `im φ ⊄ E_m`, `τ = μ_{m+1}`, `E_{m+1}/E_m` semistable.
    B,
    /// `im φ ⊂ E_m`, `E_{m+1}/E_m` semistable.
    C,
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairCase::A => "a",
            PairCase::B => "b",
            PairCase::C => "c",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairHn {
    pub chain: Vec<String>,
    /// Number of steps with slope `> τ`.
    pub m: usize,
    pub case: PairCase,
    /// Smallest `ℓ` with `im φ ⊆ E_ℓ`; `None` for `φ = 0`.
    pub phi_step: Option<usize>,
    pub hn_type: HnType,
}

fn phi_step_of(lattice: &SubobjectLattice, chain: &[usize]) -> Option<usize> {
    if lattice.phi_is_zero() {
        return None;
    }
    chain.iter().position(|&i| lattice.contains_phi(i))
}

/// Every `(chain, m, case)` satisfying the pair filtration conditions.
pub fn pair_hn_candidates(lattice: &SubobjectLattice, tau: &Rational) -> Result<Vec<PairHn>> {
    lattice.check_capacity()?;
    let mut found = Vec::new();
    for chain in lattice.chains() {
        let steps = lattice.steps(&chain);
        let k = steps.len();
        let m = steps.iter().take_while(|s| s.slope() > *tau).count();
        if m == k || steps[m..].iter().any(|s| s.slope() > *tau) || !decreasing_except(&steps, Some(m)) {
            continue;
        }
        let strictly_decreasing = decreasing_except(&steps, None);
        let others_semistable = (0..k)
            .filter(|&j| j != m)
            .all(|j| lattice.interval_semistable(chain[j], chain[j + 1]));
        if !others_semistable {
            continue;
        }
        let phi_step = phi_step_of(lattice, &chain);
        let (lo, hi) = (chain[m], chain[m + 1]);
        let mu_next = steps[m].slope();
        let quotient_semistable = strictly_decreasing && lattice.interval_semistable(lo, hi);
        // In case (a) the quotient carrying φ̄ is not compared with the next
        // slope, only μ_{m+2} < τ is kept: the optimal eigenvalues there are
        // 0 < τ − μ_{m+2} whatever the order of μ_{m+1} and μ_{m+2}.
        let case = match phi_step {
            None => quotient_semistable.then_some(PairCase::C),
            Some(l) if l <= m => quotient_semistable.then_some(PairCase::C),
            Some(l) if l == m + 1 => match mu_next.cmp(tau) {
                Ordering::Equal => quotient_semistable.then_some(PairCase::B),
                Ordering::Less => (steps[m + 1..].iter().all(|s| s.slope() < *tau)
                    && lattice.interval_pair_semistable(lo, hi, tau))
                .then_some(PairCase::A),
                Ordering::Greater => None,
            },
            Some(_) => None,
        };
        if let Some(case) = case {
            let hn_type = match case {
                PairCase::A => HnType::with_pair_quotient(steps, m)?,
                _ => HnType::new(steps)?,
            };
            found.push(PairHn {
                chain: lattice.labels(&chain),
                m,
                case,
                phi_step,
                hn_type,
            });
        }
    }
    Ok(found)
}

/// The unique filtration of a non-τ-semistable pair, found by exhaustive
/// search over the lattice's chains.
pub fn pair_hn(lattice: &SubobjectLattice, tau: &Rational) -> Result<PairHn> {
    if pair_semistable(lattice, tau)? {
        return Err(Error::AlreadySemistable);
    }
    let mut found = pair_hn_candidates(lattice, tau)?;
    match found.len() {
        0 => Err(Error::NoFiltrationFound),
        1 => Ok(found.remove(0)),
        n => Err(Error::MultipleFiltrationsFound(n)),
    }
}

fn check_phi_step(k: usize, phi_step: Option<usize>) -> Result<()> {
    match phi_step {
        Some(l) if l == 0 || l > k => Err(Error::InvalidBreakpoint(format!("φ step {l} outside 1..={k}"))),
        _ => Ok(()),
    }
}

/// `+∞` if `λ_ℓ > 0`, else `Σ (d_i − τ·r_i)·λ_i`.
pub fn pair_max_weight(
    hn_type: &HnType,
    phi_step: Option<usize>,
    tau: &Rational,
    lam: &[Rational],
) -> Result<Extended<Rational>> {
    if lam.len() != hn_type.len() {
        return Err(Error::LengthMismatch {
            expected: hn_type.len(),
            found: lam.len(),
        });
    }
    check_nondecreasing(lam)?;
    check_phi_step(hn_type.len(), phi_step)?;
    if phi_step.is_some_and(|l| lam[l - 1].is_positive()) {
        return Ok(Extended::Infinity);
    }
    Ok(Extended::Finite(linear_weight(hn_type.steps(), tau, lam)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DestabilizerCase {
    /// `im φ ⊂ E_m`: every eigenvalue is `τ − μ_i`.
    PhiInside,
    /// `im φ ⊄ E_m`: the `(m+1)`-th eigenvalue is clipped to 0.
    PhiOutside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOptimum {
    pub optimum: GaugeOptimum,
    pub case: DestabilizerCase,
}

fn check_breakpoint(hn_type: &HnType, m: usize, tau: &Rational) -> Result<()> {
    let k = hn_type.len();
    if m > k {
        return Err(Error::InvalidBreakpoint(format!("m = {m} exceeds k = {k}")));
    }
    for (i, s) in hn_type.steps().iter().enumerate() {
        let ok = if i < m { s.slope() > *tau } else { s.slope() <= *tau };
        if !ok {
            return Err(Error::InvalidBreakpoint(format!(
                "step {} has slope {} on the wrong side of τ = {}",
                i + 1,
                format_rational(&s.slope()),
                format_rational(tau)
            )));
        }
    }
    Ok(())
}

/// Closed-form destabilizer of a pair, cross-checked against the cone
/// solver on `{λ nondecreasing, λ_ℓ ≤ 0}`.
pub fn pair_optimal(hn_type: &HnType, phi_step: Option<usize>, m: usize, tau: &Rational) -> Result<PairOptimum> {
    check_breakpoint(hn_type, m, tau)?;
    check_phi_step(hn_type.len(), phi_step)?;
    let case = match phi_step {
        None => DestabilizerCase::PhiInside,
        Some(l) if l <= m => DestabilizerCase::PhiInside,
        Some(l) if l == m + 1 => DestabilizerCase::PhiOutside,
        Some(l) => {
            return Err(Error::InvalidBreakpoint(format!(
                "φ first lies in E_{l}, beyond E_{}",
                m + 1
            )))
        }
    };
    let mut closed_form: Vec<Rational> = hn_type.steps().iter().map(|s| tau - s.slope()).collect();
    if case == DestabilizerCase::PhiOutside {
        closed_form[m] = Rational::zero();
    }
    if closed_form.iter().all(Zero::is_zero) {
        return Err(Error::SemistableType);
    }
    let (metric, solved) = solve_chain(hn_type.steps(), tau, phi_step)?;
    let optimum = confirm(closed_form, &metric, solved)?;
    if case == DestabilizerCase::PhiOutside {
        let step = hn_type.steps()[m];
        let expected = int(i64::from(step.rank)) * (tau - step.slope());
        let phi_row = hn_type.len() - 1;
        let multiplier = optimum.certificate.multiplier_of(phi_row).cloned().unwrap_or_else(Rational::zero);
        if multiplier != expected {
            return Err(Error::VerificationFailed(format!(
                "φ multiplier {} differs from r(τ − μ) = {}",
                format_rational(&multiplier),
                format_rational(&expected)
            )));
        }
    }
    Ok(PairOptimum { optimum, case })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientDescriptor {
    pub rank: u32,
    pub degree: i64,
    /// Whether the induced morphism `φ̄` lands in this quotient.
    pub carries_phi: bool,
}

/// The graded object the flow converges to. For bundles pass `phi_step`
/// and `m` as `None`.
pub fn limit_object(hn_type: &HnType, phi_step: Option<usize>, m: Option<usize>) -> Result<Vec<QuotientDescriptor>> {
    let k = hn_type.len();
    check_phi_step(k, phi_step)?;
    let flagged = match (phi_step, m) {
        (_, Some(m)) if m > k => return Err(Error::InvalidBreakpoint(format!("m = {m} exceeds k = {k}"))),
        (Some(l), Some(m)) if l > m + 1 => {
            return Err(Error::InvalidBreakpoint(format!("φ step {l} beyond m + 1 = {}", m + 1)))
        }
        (Some(_), None) => return Err(Error::InvalidBreakpoint("φ step given without breakpoint".into())),
        (Some(l), Some(m)) if l == m + 1 => Some(l),
        _ => None,
    };
    Ok(hn_type
        .steps()
        .iter()
        .enumerate()
        .map(|(i, s)| QuotientDescriptor {
            rank: s.rank,
            degree: s.degree,
            carries_phi: flagged == Some(i + 1),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalOptimum {
    /// The coarsened optimal chain, or `[E]` when nothing destabilizes.
    pub chain: Vec<String>,
    /// Distinct eigenvalues on the coarsened chain.
    pub eigenvalues: Option<Vec<Rational>>,
    pub lambda_inf: Extended<SignedSquare>,
    /// Maximal chains attaining the minimum, sorted by labels.
    pub attaining_chains: Vec<Vec<String>>,
    pub chains_examined: usize,
}

/// Minimum of the weight over unit eigenvalue vectors adapted to an
/// arbitrary chain (labels of `E_1, …, E_k = E`). `tau = None` is the
/// bundle problem.
pub fn chain_weight_minimum(lattice: &SubobjectLattice, chain: &[&str], tau: Option<&Rational>) -> Result<SphereMinimum> {
    let mut indices = vec![lattice.bottom()];
    for label in chain {
        let i = lattice
            .index_of(label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown label `{label}`")))?;
        if !lattice.lt(*indices.last().expect("nonempty"), i) {
            return Err(Error::InvalidInput(format!("`{label}` does not extend the chain")));
        }
        indices.push(i);
    }
    if *indices.last().expect("nonempty") != lattice.top() {
        return Err(Error::InvalidInput("chain must end at the top".into()));
    }
    chain_minimum(lattice, &indices, tau).map(|(_, m)| m)
}

fn chain_minimum(lattice: &SubobjectLattice, chain: &[usize], tau: Option<&Rational>) -> Result<(InnerProduct, SphereMinimum)> {
    let steps = lattice.steps(chain);
    match tau {
        None => solve_chain(&steps, &lattice.slope(), None),
        Some(t) => solve_chain(&steps, t, phi_step_of(lattice, chain)),
    }
}

type Coarsened = (Vec<String>, Vec<Rational>);

/// Merges adjacent equal eigenvalues: keeps `E_i` iff `λ_i < λ_{i+1}`.
fn coarsen(lattice: &SubobjectLattice, chain: &[usize], lam: &[Rational]) -> Coarsened {
    let k = lam.len();
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for i in 0..k {
        if i + 1 == k || lam[i] < lam[i + 1] {
            labels.push(lattice.label(chain[i + 1]).to_string());
            values.push(lam[i].clone());
        }
    }
    (labels, values)
}

/// Minimizes the weight over every maximal chain and checks that the
/// minimum sits exactly on the (τ-)HN filtration with the closed-form
/// eigenvalues.
pub fn global_optimal_over_lattice(lattice: &SubobjectLattice, tau: Option<&Rational>) -> Result<GlobalOptimum> {
    lattice.check_capacity()?;
    let chains = lattice.maximal_chains();
    let mut results = Vec::with_capacity(chains.len());
    for chain in &chains {
        let (_, min) = chain_minimum(lattice, chain, tau)?;
        results.push((chain, min));
    }
    let best = results
        .iter()
        .map(|(_, m)| m.value.clone())
        .min()
        .ok_or_else(|| Error::NotALattice("no maximal chain".into()))?;

    let expected_semistable = match tau {
        None => hn_filtration(lattice)?.is_trivial(),
        Some(t) => pair_semistable(lattice, t)?,
    };
    let negative = best.finite().is_some_and(|v| v.sign() < 0);
    if negative == expected_semistable {
        return Err(Error::VerificationFailed(format!(
            "global minimum {best} contradicts the semistability verdict"
        )));
    }

    let mut attaining: Vec<(Vec<String>, Coarsened)> = results
        .iter()
        .filter(|(_, m)| m.value == best)
        .map(|(chain, m)| {
            let coarse = m
                .ray
                .as_ref()
                .map(|r| coarsen(lattice, chain, r.direction()))
                .unwrap_or_else(|| (vec![lattice.label(lattice.top()).to_string()], Vec::new()));
            (lattice.labels(chain), coarse)
        })
        .collect();
    attaining.sort_by(|a, b| a.0.cmp(&b.0));
    let (chain, eigenvalues) = attaining[0].1.clone();
    if attaining.iter().any(|(_, coarse)| coarse.0 != chain || coarse.1 != eigenvalues) {
        return Err(Error::VerificationFailed("minimizing chains coarsen differently".into()));
    }

    if negative {
        let (expected_chain, expected_ray, expected_value) = match tau {
            None => {
                let hn = hn_filtration(lattice)?;
                let opt = bundle_optimal(&hn.hn_type)?;
                (hn.chain, opt.ray, opt.lambda_inf)
            }
            Some(t) => {
                let hn = pair_hn(lattice, t)?;
                let opt = pair_optimal(&hn.hn_type, hn.phi_step, hn.m, t)?;
                (hn.chain, opt.optimum.ray, opt.optimum.lambda_inf)
            }
        };
        let expected_eigenvalues: Vec<Rational> = expected_ray.direction().to_vec();
        if chain != expected_chain || eigenvalues != expected_eigenvalues || best != Extended::Finite(expected_value) {
            return Err(Error::VerificationFailed(format!(
                "global optimum on {chain:?} differs from the closed form on {expected_chain:?}"
            )));
        }
    }
    Ok(GlobalOptimum {
        chain,
        eigenvalues: negative.then_some(eigenvalues),
        lambda_inf: best,
        attaining_chains: attaining.into_iter().map(|(c, _)| c).collect(),
        chains_examined: chains.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, ints};

    fn lattice(nodes: &[(&str, u32, i64, bool)], order: &[(&str, &str)]) -> SubobjectLattice {
        let nodes = nodes.iter().map(|&(l, r, d, p)| Node::new(l, r, d, p)).collect();
        let order: Vec<(String, String)> = order.iter().map(|&(a, b)| (a.into(), b.into())).collect();
        SubobjectLattice::new(nodes, &order).unwrap()
    }

    fn chain_lattice() -> SubobjectLattice {
        lattice(&[("A", 1, 1, false), ("E", 2, 0, false)], &[("A", "E")])
    }

    fn diamond() -> SubobjectLattice {
        lattice(
            &[("A", 1, 1, false), ("B", 1, 1, false), ("AB", 2, 2, false), ("E", 3, 1, false)],
            &[("A", "AB"), ("B", "AB"), ("AB", "E")],
        )
    }

    #[test]
    fn chain_lattice_hn() {
        let hn = hn_filtration(&chain_lattice()).unwrap();
        assert_eq!(hn.chain, vec!["A", "E"]);
        assert_eq!(hn.hn_type, HnType::from_pairs(&[(1, 1), (1, -1)]).unwrap());
    }

    #[test]
    fn semistable_lattice_hn_is_trivial() {
        let l = lattice(&[("A", 1, 0, false), ("E", 2, 1, false)], &[("A", "E")]);
        let hn = hn_filtration(&l).unwrap();
        assert!(hn.is_trivial());
        assert_eq!(hn.hn_type, HnType::from_pairs(&[(2, 1)]).unwrap());
    }

    #[test]
    fn diamond_hn_takes_the_join() {
        let hn = hn_filtration(&diamond()).unwrap();
        assert_eq!(hn.chain, vec!["AB", "E"]);
        assert_eq!(hn.hn_type, HnType::from_pairs(&[(2, 2), (1, -1)]).unwrap());
    }

    #[test]
    fn ambiguous_without_join() {
        let l = lattice(&[("A", 1, 1, false), ("B", 1, 1, false), ("E", 3, 1, false)], &[("A", "E"), ("B", "E")]);
        assert!(matches!(hn_filtration(&l), Err(Error::AmbiguousLattice(_))));
    }

    #[test]
    fn invalid_lattices() {
        let nodes = vec![Node::new("A", 1, 0, false), Node::new("E", 1, 0, false)];
        let order = vec![("A".to_string(), "E".to_string())];
        assert!(matches!(SubobjectLattice::new(nodes, &order), Err(Error::NotALattice(_))));
        let nodes = vec![Node::new("A", 1, 0, false), Node::new("B", 1, 0, false)];
        assert!(matches!(SubobjectLattice::new(nodes, &[]), Err(Error::NotALattice(_))));
        let nodes = vec![Node::new("A", 1, 0, false), Node::new("E", 2, 0, false)];
        let cyc = vec![("A".to_string(), "E".to_string()), ("E".to_string(), "A".to_string())];
        assert!(matches!(SubobjectLattice::new(nodes, &cyc), Err(Error::NotALattice(_))));
        let nodes = vec![Node::new("A", 1, 0, true), Node::new("B", 2, 0, false), Node::new("E", 3, 0, true)];
        let order = vec![("A".to_string(), "B".to_string()), ("B".to_string(), "E".to_string())];
        assert!(matches!(SubobjectLattice::new(nodes, &order), Err(Error::NotALattice(_))));
        let nodes = vec![Node::new("A", 1, 0, false)];
        assert!(matches!(
            SubobjectLattice::new(nodes, &[("A".to_string(), "Z".to_string())]),
            Err(Error::NotALattice(_))
        ));
    }

    #[test]
    fn bundle_weight_examples() {
        let t = HnType::from_pairs(&[(1, 1), (1, -1)]).unwrap();
        assert_eq!(bundle_max_weight(&t, &ints(&[3, 3])).unwrap(), int(0));
        assert_eq!(bundle_max_weight(&t, &ints(&[-1, 1])).unwrap(), int(-2));
        assert_eq!(bundle_max_weight(&t, &ints(&[0, 0])).unwrap(), int(0));
        assert!(matches!(bundle_max_weight(&t, &ints(&[0])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn bundle_optimal_examples() {
        let t = HnType::from_pairs(&[(1, 1), (1, -1)]).unwrap();
        let o = bundle_optimal(&t).unwrap();
        assert_eq!(o.ray.direction(), ints(&[-1, 1]).as_slice());
        assert_eq!(o.lambda_inf, SignedSquare::neg_sqrt(int(2)));

        let t = HnType::from_pairs(&[(1, 2), (1, 0), (1, -1)]).unwrap();
        let o = bundle_optimal(&t).unwrap();
        assert_eq!(o.ray.direction(), vec![frac(-5, 3), frac(1, 3), frac(4, 3)].as_slice());
        assert_eq!(o.lambda_inf, SignedSquare::neg_sqrt(frac(14, 3)));

        let t = HnType::from_pairs(&[(2, 3)]).unwrap();
        assert_eq!(bundle_optimal(&t), Err(Error::SemistableType));
    }

    #[test]
    fn pair_semistable_examples() {
        // No proper node carries φ and μ(E) = τ: bundle semistability.
        let l = lattice(&[("A", 1, 0, false), ("E", 2, 0, true)], &[("A", "E")]);
        assert!(pair_semistable(&l, &int(0)).unwrap());
        let l = lattice(&[("A", 1, 1, false), ("E", 2, 0, true)], &[("A", "E")]);
        assert!(!pair_semistable(&l, &int(0)).unwrap());
        let l = lattice(&[("E", 2, 0, true)], &[]);
        assert!(pair_semistable(&l, &int(1)).unwrap());
        assert!(matches!(
            pair_semistable(&l, &int(-1)),
            Err(Error::TopologicalConditionViolated { .. })
        ));
    }

    #[test]
    fn pair_hn_case_a() {
        let l = lattice(&[("A", 1, 2, false), ("E", 2, 2, true)], &[("A", "E")]);
        let hn = pair_hn(&l, &int(1)).unwrap();
        assert_eq!(hn.chain, vec!["A", "E"]);
        assert_eq!(hn.m, 1);
        assert_eq!(hn.case, PairCase::A);
        assert_eq!(hn.phi_step, Some(2));
    }

    #[test]
    fn pair_hn_with_zero_phi_is_hn() {
        let l = lattice(
            &[("0", 0, 0, true), ("A", 1, 3, true), ("B", 2, 4, true), ("E", 3, 3, true)],
            &[("A", "B"), ("B", "E")],
        );
        let tau = frac(3, 2);
        let hn = pair_hn(&l, &tau).unwrap();
        let bundle = hn_filtration(&l).unwrap();
        assert_eq!(hn.chain, bundle.chain);
        assert_eq!(hn.case, PairCase::C);
        assert_eq!(hn.m, bundle.hn_type.steps().iter().filter(|s| s.slope() > tau).count());
    }

    #[test]
    fn pair_quotient_may_have_smaller_slope() {
        // im φ ⊂ B with μ(B) = −4 < μ(E/B) = 0 ≤ τ: the optimal element is
        // (0, 1) on B ⊂ E although the slopes increase.
        let l = lattice(&[("B", 1, -4, true), ("E", 2, -4, true)], &[("B", "E")]);
        let hn = pair_hn(&l, &int(1)).unwrap();
        assert_eq!(hn.chain, vec!["B", "E"]);
        assert_eq!((hn.m, hn.case, hn.phi_step), (0, PairCase::A, Some(1)));
        let g = global_optimal_over_lattice(&l, Some(&int(1))).unwrap();
        assert_eq!(g.eigenvalues, Some(ints(&[0, 1])));
        assert!(HnType::new(hn.hn_type.steps().to_vec()).is_err());
    }

    #[test]
    fn pair_quotient_followed_by_slope_tau_is_merged() {
        let l = lattice(
            &[("a", 1, -2, true), ("ad", 2, 0, true), ("E", 5, 0, true)],
            &[("a", "ad"), ("ad", "E")],
        );
        let hn = pair_hn(&l, &int(2)).unwrap();
        assert_eq!(hn.chain, vec!["ad", "E"]);
        assert_eq!(hn.case, PairCase::A);
        let g = global_optimal_over_lattice(&l, Some(&int(2))).unwrap();
        assert_eq!(g.eigenvalues, Some(ints(&[0, 2])));
    }

    #[test]
    fn pair_hn_rejects_semistable() {
        let l = lattice(&[("E", 2, 0, true)], &[]);
        assert_eq!(pair_hn(&l, &int(1)), Err(Error::AlreadySemistable));
    }

    #[test]
    fn pair_hn_detects_unfaithful_lattice() {
        // Two incomparable slope-2 line subobjects with no join: both
        // two-step chains pass.
        let l = lattice(
            &[("A", 1, 2, false), ("B", 1, 2, false), ("E", 2, 0, true)],
            &[("A", "E"), ("B", "E")],
        );
        assert_eq!(pair_hn(&l, &int(1)), Err(Error::MultipleFiltrationsFound(2)));
    }

    #[test]
    fn pair_max_weight_examples() {
        let t = HnType::from_pairs(&[(1, 2), (1, 0)]).unwrap();
        assert_eq!(pair_max_weight(&t, Some(1), &int(1), &ints(&[1, 2])).unwrap(), Extended::Infinity);
        assert_eq!(pair_max_weight(&t, Some(1), &int(1), &ints(&[0, 0])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(
            pair_max_weight(&t, Some(1), &int(1), &ints(&[-1, 1])).unwrap(),
            Extended::Finite(int(-2))
        );
        assert!(matches!(pair_max_weight(&t, Some(3), &int(1), &ints(&[0, 0])), Err(Error::InvalidBreakpoint(_))));
    }

    #[test]
    fn pair_optimal_examples() {
        let t = HnType::from_pairs(&[(1, 2), (1, 0)]).unwrap();
        let inside = pair_optimal(&t, Some(1), 1, &int(1)).unwrap();
        assert_eq!(inside.case, DestabilizerCase::PhiInside);
        assert_eq!(inside.optimum.ray.direction(), ints(&[-1, 1]).as_slice());
        assert_eq!(inside.optimum.lambda_inf, SignedSquare::neg_sqrt(int(2)));

        let outside = pair_optimal(&t, Some(2), 1, &int(1)).unwrap();
        assert_eq!(outside.case, DestabilizerCase::PhiOutside);
        assert_eq!(outside.optimum.ray.direction(), ints(&[-1, 0]).as_slice());
        assert_eq!(outside.optimum.lambda_inf, SignedSquare::neg_sqrt(int(1)));
        assert_eq!(outside.optimum.certificate.multiplier_of(1), Some(&int(1)));

        // τ = μ_{m+1}: clipping is inactive, both cases coincide.
        let t = HnType::from_pairs(&[(1, 3), (1, 1)]).unwrap();
        let a = pair_optimal(&t, Some(1), 1, &int(1)).unwrap();
        let b = pair_optimal(&t, Some(2), 1, &int(1)).unwrap();
        assert_eq!(a.optimum.ray.direction(), b.optimum.ray.direction());
        assert_eq!(b.optimum.certificate.multiplier_of(1).cloned().unwrap_or_default(), int(0));
    }

    #[test]
    fn pair_optimal_breakpoint_errors() {
        let t = HnType::from_pairs(&[(1, 2), (1, 0)]).unwrap();
        assert!(matches!(pair_optimal(&t, Some(1), 0, &int(1)), Err(Error::InvalidBreakpoint(_))));
        assert!(matches!(pair_optimal(&t, Some(2), 0, &int(3)), Err(Error::InvalidBreakpoint(_))));
    }

    #[test]
    fn limit_objects() {
        let t = HnType::from_pairs(&[(1, 2), (1, 0), (2, -3)]).unwrap();
        let bundle = limit_object(&t, None, None).unwrap();
        assert!(bundle.iter().all(|q| !q.carries_phi));
        assert_eq!(bundle.len(), 3);
        let outside = limit_object(&t, Some(2), Some(1)).unwrap();
        assert_eq!(outside.iter().map(|q| q.carries_phi).collect::<Vec<_>>(), vec![false, true, false]);
        let inside = limit_object(&t, Some(1), Some(1)).unwrap();
        assert!(inside.iter().all(|q| !q.carries_phi));
        assert!(limit_object(&t, Some(3), Some(1)).is_err());
        assert!(limit_object(&t, None, Some(4)).is_err());
    }

    #[test]
    fn global_optimum_chain_lattice() {
        let l = chain_lattice();
        let g = global_optimal_over_lattice(&l, None).unwrap();
        assert_eq!(g.chain, vec!["A", "E"]);
        assert_eq!(g.eigenvalues, Some(ints(&[-1, 1])));
        let closed = bundle_optimal(&hn_filtration(&l).unwrap().hn_type).unwrap();
        assert_eq!(g.lambda_inf, Extended::Finite(closed.lambda_inf));
    }

    #[test]
    fn global_optimum_semistable() {
        let l = lattice(&[("A", 1, 0, false), ("E", 2, 1, false)], &[("A", "E")]);
        let g = global_optimal_over_lattice(&l, None).unwrap();
        assert!(g.eigenvalues.is_none());
        assert!(g.lambda_inf >= Extended::Finite(SignedSquare::zero()));
    }

    #[test]
    fn global_optimum_diamond() {
        let l = diamond();
        let g = global_optimal_over_lattice(&l, None).unwrap();
        assert_eq!(g.chain, vec!["AB", "E"]);
        assert_eq!(g.attaining_chains, vec![vec!["A", "AB", "E"], vec!["B", "AB", "E"]]);
        let a_only = chain_weight_minimum(&l, &["A", "E"], None).unwrap().value;
        let b_only = chain_weight_minimum(&l, &["B", "E"], None).unwrap().value;
        assert!(g.lambda_inf < a_only);
        assert!(g.lambda_inf < b_only);
    }

    #[test]
    fn global_optimum_pair() {
        let l = lattice(&[("A", 1, 2, false), ("E", 2, 2, true)], &[("A", "E")]);
        let g = global_optimal_over_lattice(&l, Some(&int(1))).unwrap();
        assert_eq!(g.chain, vec!["A", "E"]);
        assert_eq!(g.eigenvalues, Some(ints(&[-1, 0])));
    }
}
