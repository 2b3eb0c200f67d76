//! The `GL`-type examples: `Hom(V, V₀)` under `f ↦ f∘u⁻¹` (quotient a
//! Grassmannian) and chains `V_1 → V_2 → … → V_{m+1}` (quotient a flag
//! manifold), both with positive stability parameters.
//!
//! Subspaces are reported by canonical bases (nonzero rows of the reduced
//! row echelon form), which are basis independent.

use num_traits::{Signed, Zero};

use crate::cone::InnerProduct;
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::{int, Rational, SignedSquare};
use crate::torus::{Destabilization, SupportVector, TorusAction, Weight, WeightSystem};

/// Canonical basis of the span of `vectors` in `ℚ^dim`.
pub fn canonical_basis(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let m = RationalMatrix::from_rows(vectors.to_vec(), dim).expect("vector lengths agree");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

fn check_positive(t: &Rational, what: &str) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::InvalidInput(format!("{what} must be positive")));
    }
    Ok(())
}

/// `f ∈ Hom(V, V₀)` as an `r₀ × r` matrix with parameter `t > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomProblem {
    f: RationalMatrix,
    t: Rational,
}

impl HomProblem {
    pub fn new(f: RationalMatrix, t: Rational) -> Result<Self> {
        check_positive(&t, "t")?;
        if f.cols() == 0 {
            return Err(Error::InvalidInput("V must be nonzero".into()));
        }
        Ok(Self { f, t })
    }

    pub fn f(&self) -> &RationalMatrix {
        &self.f
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// `f ↦ f∘u⁻¹` for invertible `u ∈ GL(V)`.
    pub fn act(&self, u: &RationalMatrix) -> Result<Self> {
        let inv = u
            .inverse()
            .ok_or_else(|| Error::InvalidInput("group element is not invertible".into()))?;
        Ok(Self {
            f: self.f.mul(&inv)?,
            t: self.t.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomOptimum {
    pub kernel_basis: Vec<Vec<Rational>>,
    /// Orthogonal projector onto `ker f`; rational because `ker f` is.
    pub projector: RationalMatrix,
    /// `−projector`, unnormalized.
    pub ray: RationalMatrix,
    pub lambda_inf: SignedSquare,
}

impl HomOptimum {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomVerdict {
    Semistable,
    Unstable(HomOptimum),
}

fn orthogonal_projector(basis: &[Vec<Rational>], dim: usize) -> RationalMatrix {
    let k = RationalMatrix::from_columns(basis, dim).expect("basis lengths agree");
    let kt = k.transpose();
    let gram_inv = kt
        .mul(&k)
        .and_then(|g| g.inverse().ok_or(Error::NotPositiveDefinite))
        .expect("independent basis");
    k.mul(&gram_inv)
        .and_then(|x| x.mul(&kt))
        .expect("dimensions agree")
}

/// `f` is unstable iff `ker f ≠ 0`; the optimal element is `−pr_{ker f}`
/// with `λ_inf = −t·√(dim ker f)`.
pub fn hom_optimal(p: &HomProblem) -> HomVerdict {
    let r = p.f.cols();
    let kernel_basis = canonical_basis(&p.f.kernel_basis(), r);
    if kernel_basis.is_empty() {
        return HomVerdict::Semistable;
    }
    let projector = orthogonal_projector(&kernel_basis, r);
    let ray = projector.scale(&int(-1));
    let k = int(kernel_basis.len() as i64);
    let lambda_inf = SignedSquare::neg_sqrt(&p.t * &p.t * k);
    HomVerdict::Unstable(HomOptimum {
        kernel_basis,
        projector,
        ray,
        lambda_inf,
    })
}

/// Data of the reduction to the diagonal torus of a basis adapted to
/// `ker f`.
#[derive(Debug, Clone)]
pub struct AdaptedTorusCheck {
    /// Columns: a basis of the row space followed by a basis of `ker f`.
    pub basis: RationalMatrix,
    pub torus_verdict: Destabilization,
    /// `M·diag(ray)·M⁻¹` for the torus ray.
    pub ray_in_original_basis: Option<RationalMatrix>,
    pub agrees: bool,
}

/// Solves the torus problem in a kernel-adapted basis and compares with
/// [`hom_optimal`].
pub fn hom_adapted_torus(p: &HomProblem) -> Result<AdaptedTorusCheck> {
    let HomVerdict::Unstable(opt) = hom_optimal(p) else {
        return Err(Error::NotDestabilizable);
    };
    let r = p.f.cols();
    let row_space = p.f.transpose().column_space_basis();
    let columns: Vec<Vec<Rational>> = row_space.iter().chain(&opt.kernel_basis).cloned().collect();
    let basis = RationalMatrix::from_columns(&columns, r)?;
    let adapted = p.f.mul(&basis)?;

    let weights = (0..r)
        .map(|j| {
            let mut chi = vec![Rational::zero(); r];
            chi[j] = int(-1);
            Weight::new(format!("c{}", j + 1), chi)
        })
        .collect();
    let ws = WeightSystem::new(r, weights)?;
    let support: Vec<String> = (0..r)
        .filter(|&j| adapted.column(j).iter().any(|x| !x.is_zero()))
        .map(|j| format!("c{}", j + 1))
        .collect();
    let action = TorusAction::new(ws, vec![p.t.clone(); r], InnerProduct::identity(r))?;
    let torus_verdict = action.optimal_destabilizing(&SupportVector::supported_on(&support))?;

    let n_row = row_space.len();
    let expected: Vec<Rational> = (0..r).map(|j| if j < n_row { Rational::zero() } else { int(-1) }).collect();
    let (ray_in_original_basis, agrees) = match torus_verdict.optimal() {
        Some(o) => {
            let inv = basis
                .inverse()
                .ok_or_else(|| Error::VerificationFailed("adapted basis is singular".into()))?;
            let s = basis
                .mul(&RationalMatrix::diagonal(o.ray.direction()))?
                .mul(&inv)?;
            let ray_matches = o.ray.primitive() == crate::rational::primitive_integer_vector(&expected);
            let class_matches = same_positive_multiple(&s, &opt.ray);
            let agrees = ray_matches && class_matches && o.lambda_inf == opt.lambda_inf;
            (Some(s), agrees)
        }
        None => (None, false),
    };
    Ok(AdaptedTorusCheck {
        basis,
        torus_verdict,
        ray_in_original_basis,
        agrees,
    })
}

pub fn hom_cross_check(p: &HomProblem) -> Result<bool> {
    hom_adapted_torus(p).map(|c| c.agrees)
}

fn same_positive_multiple(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return false;
    }
    let flat = |m: &RationalMatrix| -> Vec<Rational> { m.to_rows().into_iter().flatten().collect() };
    crate::rational::primitive_integer_vector(&flat(a)) == crate::rational::primitive_integer_vector(&flat(b))
}

/// Chain `f_i : V_i → V_{i+1}`, `i = 1..m`, with parameters `t_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainProblem {
    maps: Vec<RationalMatrix>,
    t: Vec<Rational>,
}

impl ChainProblem {
    pub fn new(maps: Vec<RationalMatrix>, t: Vec<Rational>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidInput("a chain needs at least one map".into()));
        }
        if t.len() != maps.len() {
            return Err(Error::LengthMismatch {
                expected: maps.len(),
                found: t.len(),
            });
        }
        for t_i in &t {
            check_positive(t_i, "t_i")?;
        }
        for pair in maps.windows(2) {
            if pair[1].cols() != pair[0].rows() {
                return Err(Error::DimensionMismatch {
                    expected: pair[0].rows(),
                    found: pair[1].cols(),
                });
            }
        }
        Ok(Self { maps, t })
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    /// `(d_1, …, d_m, d_{m+1})`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.maps.iter().map(RationalMatrix::cols).collect();
        d.push(self.maps.last().expect("nonempty").rows());
        d
    }

    /// `f_i ↦ g_{i+1} f_i g_i⁻¹` with `g_{m+1} = id`; `g` has one invertible
    /// matrix per `V_1..V_m`.
    pub fn act(&self, g: &[RationalMatrix]) -> Result<Self> {
        if g.len() != self.maps.len() {
            return Err(Error::LengthMismatch {
                expected: self.maps.len(),
                found: g.len(),
            });
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, f) in self.maps.iter().enumerate() {
            let inv = g[i]
                .inverse()
                .ok_or_else(|| Error::InvalidInput("group element is not invertible".into()))?;
            let mut h = f.mul(&inv)?;
            if let Some(next) = g.get(i + 1) {
                h = next.mul(&h)?;
            }
            maps.push(h);
        }
        Self::new(maps, self.t.clone())
    }

    /// `f_m ∘ ⋯ ∘ f_i` for `i = 1..m`.
    fn suffix_composites(&self) -> Vec<RationalMatrix> {
        let m = self.maps.len();
        let mut out = vec![self.maps[m - 1].clone(); m];
        for i in (0..m - 1).rev() {
            out[i] = out[i + 1].mul(&self.maps[i]).expect("composable");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainInvariants {
    /// Canonical bases of `W_i = (f_m∘⋯∘f_i)(V_i) ⊂ V`.
    pub images: Vec<Vec<Vec<Rational>>>,
    /// `ρ_i = rk(f_m∘⋯∘f_i)`.
    pub ranks: Vec<usize>,
    /// Canonical bases of `E_i = ker(f_m∘⋯∘f_i) ⊂ V_i`.
    pub kernels: Vec<Vec<Vec<Rational>>>,
    /// Whether `d_1 ≤ ⋯ ≤ d_m`; other chains are still computed but flagged.
    pub monotone_dims: bool,
}

pub fn chain_invariants(p: &ChainProblem) -> ChainInvariants {
    let dims = p.dims();
    let v_dim = *dims.last().expect("nonempty");
    let composites = p.suffix_composites();
    let images = composites
        .iter()
        .map(|c| canonical_basis(&c.column_space_basis(), v_dim))
        .collect();
    let ranks = composites.iter().map(RationalMatrix::rank).collect();
    let kernels = composites
        .iter()
        .zip(&dims)
        .map(|(c, &d)| canonical_basis(&c.kernel_basis(), d))
        .collect();
    let monotone_dims = dims[..dims.len() - 1].windows(2).all(|w| w[0] <= w[1]);
    ChainInvariants {
        images,
        ranks,
        kernels,
        monotone_dims,
    }
}

/// Semistable (equivalently stable) iff every `f_i` is injective.
pub fn chain_semistable(p: &ChainProblem) -> bool {
    p.maps.iter().all(|f| f.rank() == f.cols())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLimit {
    /// `f̄_i : V_i/E_i → V_{i+1}/E_{i+1}` in the bases given by the row
    /// spaces of the composites (the orthogonal complements of `E_i`).
    pub quotient_maps: Vec<RationalMatrix>,
    pub stable: bool,
    /// The flag `(W_1(f), …, W_m(f))`.
    pub flag: Vec<Vec<Vec<Rational>>>,
    pub ranks: Vec<usize>,
}

pub fn chain_limit(p: &ChainProblem) -> Result<ChainLimit> {
    if chain_semistable(p) {
        return Err(Error::NotDestabilizable);
    }
    let inv = chain_invariants(p);
    let dims = p.dims();
    let composites = p.suffix_composites();
    // Complement bases: row space of the composite for V_1..V_m, everything for V.
    let mut complements: Vec<Vec<Vec<Rational>>> = composites
        .iter()
        .map(|c| c.transpose().column_space_basis())
        .collect();
    let v_dim = *dims.last().expect("nonempty");
    complements.push(RationalMatrix::identity(v_dim).to_rows());
    let mut kernels = inv.kernels.clone();
    kernels.push(Vec::new());

    let mut quotient_maps = Vec::with_capacity(p.maps.len());
    for (i, f) in p.maps.iter().enumerate() {
        let target_cols: Vec<Vec<Rational>> = complements[i + 1].iter().chain(&kernels[i + 1]).cloned().collect();
        let target = RationalMatrix::from_columns(&target_cols, dims[i + 1])?;
        let rho_next = complements[i + 1].len();
        let mut qm = RationalMatrix::zeros(rho_next, complements[i].len());
        for (col, b) in complements[i].iter().enumerate() {
            let y = f.mul_vec(b)?;
            let coords = target
                .solve_unique(&y)
                .ok_or_else(|| Error::VerificationFailed("quotient coordinates".into()))?;
            for row in 0..rho_next {
                qm[(row, col)] = coords[row].clone();
            }
        }
        quotient_maps.push(qm);
    }
    let stable = quotient_maps.iter().all(|q| q.rank() == q.cols());
    Ok(ChainLimit {
        quotient_maps,
        stable,
        flag: inv.images,
        ranks: inv.ranks,
    })
}
