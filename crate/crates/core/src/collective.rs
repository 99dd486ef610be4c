//! Collective spin operators and states on the symmetric (Dicke) subspace.
//!
//! For `N` spin-1/2 particles the maximal-spin sector `S = N/2` is an
//! `(N+1)`-dimensional space spanned by `|S, m⟩` with `m = -N/2 … N/2`.
//! All operators here are stored in that basis, ordered by ascending `m`,
//! with ħ = 1 and spin (not Pauli) normalization: a single spin has
//! `S^z = σ^z / 2`.
//!
//! Collective operators are Hermitian and banded: `S_z` is diagonal,
//! `S_x`/`S_y` are tridiagonal, and symmetrized pair products reach
//! half-bandwidth 2. We store only the upper bands; the lower triangle is
//! implied by Hermiticity, so every [`CollectiveOperator`] is Hermitian by
//! construction.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm tolerance accepted when validating state amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// A collective spin axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Polarization direction of a spin-coherent product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    PlusX,
    #[default]
    MinusX,
}

/// A normalized pure state of the Dicke subspace.
///
/// `amplitudes[k]` is the coefficient of `|S, m⟩` with `m = k - N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl DickeState {
    /// Builds a state from raw amplitudes, validating length and norm.
    pub fn new(n_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::invalid("n_spins must be at least 1"));
        }
        if amplitudes.len() != n_spins + 1 {
            return Err(Error::DimensionMismatch {
                expected: n_spins + 1,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid(format!(
                "state not normalized: sum |a|^2 = {norm_sq:.12e}"
            )));
        }
        Ok(Self { n_spins, amplitudes })
    }

    /// Builds a state from raw amplitudes, rescaling to unit norm.
    pub fn normalized(n_spins: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n_spins, amplitudes)
    }

    /// Basis state `|S, m⟩` with `m = k - N/2` for index `k`.
    pub fn basis_state(n_spins: usize, k: usize) -> Result<Self> {
        if k > n_spins {
            return Err(Error::invalid(format!("basis index {k} > N = {n_spins}")));
        }
        let mut amplitudes = vec![Complex64::ZERO; n_spins + 1];
        amplitudes[k] = Complex64::ONE;
        Self::new(n_spins, amplitudes)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n_spins != other.n_spins {
            return Err(Error::SpinCountMismatch {
                expected: self.n_spins,
                got: other.n_spins,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// A Hermitian banded operator on the Dicke subspace.
///
/// Only the main diagonal and the upper bands are stored:
/// `bands[b][i]` holds the element `(i, i+b)`. Lower elements follow from
/// Hermiticity, so instances are Hermitian exactly, and band 0 is kept real.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOperator {
    n_spins: usize,
    bands: Vec<Vec<Complex64>>,
}

impl CollectiveOperator {
    fn zeros(n_spins: usize, half_bandwidth: usize) -> Self {
        let dim = n_spins + 1;
        let hb = half_bandwidth.min(dim - 1);
        let bands = (0..=hb).map(|b| vec![Complex64::ZERO; dim - b]).collect();
        Self { n_spins, bands }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    pub fn half_bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    /// Element `(i, j)`, resolving the lower triangle through Hermiticity.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j >= i {
            let b = j - i;
            if b < self.bands.len() {
                self.bands[b][i]
            } else {
                Complex64::ZERO
            }
        } else {
            self.get(j, i).conj()
        }
    }

    /// Matrix-vector product; `O(dim · half_bandwidth)`.
    pub fn apply_slice(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let mut out = vec![Complex64::ZERO; dim];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.bands[0][i] * v[i];
            for b in 1..self.bands.len() {
                if i + b < dim {
                    acc += self.bands[b][i] * v[i + b];
                }
                if i >= b {
                    acc += self.bands[b][i - b].conj() * v[i - b];
                }
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Applies the operator to a state, returning the (unnormalized) image.
    pub fn apply(&self, state: &DickeState) -> Result<Vec<Complex64>> {
        if state.n_spins() != self.n_spins {
            return Err(Error::SpinCountMismatch {
                expected: self.n_spins,
                got: state.n_spins(),
            });
        }
        self.apply_slice(state.amplitudes())
    }

    /// Dense copy of the operator.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |i, j| self.get(i, j))
    }

    /// Scales every element by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let bands = self
            .bands
            .iter()
            .map(|band| band.iter().map(|z| z * factor).collect())
            .collect();
        Self {
            n_spins: self.n_spins,
            bands,
        }
    }

    /// Sum of two operators; the result's bandwidth is the larger of the two.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_spins != other.n_spins {
            return Err(Error::SpinCountMismatch {
                expected: self.n_spins,
                got: other.n_spins,
            });
        }
        let hb = self.half_bandwidth().max(other.half_bandwidth());
        let mut out = Self::zeros(self.n_spins, hb);
        for b in 0..out.bands.len() {
            for i in 0..out.bands[b].len() {
                let mut z = Complex64::ZERO;
                if b < self.bands.len() {
                    z += self.bands[b][i];
                }
                if b < other.bands.len() {
                    z += other.bands[b][i];
                }
                out.bands[b][i] = z;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Largest absolute element, over the stored bands.
    pub fn max_abs(&self) -> f64 {
        self.bands
            .iter()
            .flat_map(|band| band.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }
}

/// Ladder coefficient `√(S(S+1) − m(m+1))` for raising out of `m`.
fn ladder(s: f64, m: f64) -> f64 {
    (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// The matrix of `S_axis` on the Dicke subspace of `n` spins.
///
/// `S_z` is diagonal with entries `m`; `S_x = (S_+ + S_-)/2` and
/// `S_y = (S_+ - S_-)/(2i)` are tridiagonal with ladder elements
/// `√(S(S+1) − m(m±1))`.
pub fn build_collective(axis: Axis, n_spins: usize) -> Result<CollectiveOperator> {
    if n_spins == 0 {
        return Err(Error::invalid("n_spins must be at least 1"));
    }
    if n_spins == usize::MAX {
        return Err(Error::invalid("n_spins + 1 overflows"));
    }
    let dim = n_spins + 1;
    let s = n_spins as f64 / 2.0;
    let mut op = CollectiveOperator::zeros(n_spins, if axis == Axis::Z { 0 } else { 1 });
    match axis {
        Axis::Z => {
            for i in 0..dim {
                op.bands[0][i] = Complex64::new(i as f64 - s, 0.0);
            }
        }
        Axis::X => {
            for i in 0..dim - 1 {
                let m = i as f64 - s;
                op.bands[1][i] = Complex64::new(ladder(s, m) / 2.0, 0.0);
            }
        }
        Axis::Y => {
            // Upper element (m, m+1) of (S_+ - S_-)/(2i) is +i c_m / 2.
            for i in 0..dim - 1 {
                let m = i as f64 - s;
                op.bands[1][i] = Complex64::new(0.0, ladder(s, m) / 2.0);
            }
        }
    }
    Ok(op)
}

/// The symmetrized product `AB + BA`.
///
/// Hermitian whenever `A` and `B` are, with half-bandwidth at most the sum
/// of the inputs'.
pub fn symmetrized_product(
    a: &CollectiveOperator,
    b: &CollectiveOperator,
) -> Result<CollectiveOperator> {
    if a.n_spins != b.n_spins {
        return Err(Error::SpinCountMismatch {
            expected: a.n_spins,
            got: b.n_spins,
        });
    }
    let dim = a.dim();
    let hb = (a.half_bandwidth() + b.half_bandwidth()).min(dim - 1);
    let mut out = CollectiveOperator::zeros(a.n_spins, hb);
    let reach = a.half_bandwidth().max(b.half_bandwidth());
    for band in 0..=hb {
        for i in 0..dim - band {
            let j = i + band;
            // (AB + BA)_{ij}; k runs over the overlap of both bands.
            let k_lo = i.saturating_sub(reach).min(j.saturating_sub(reach));
            let k_hi = (i + reach).max(j + reach).min(dim - 1);
            let mut z = Complex64::ZERO;
            for k in k_lo..=k_hi {
                z += a.get(i, k) * b.get(k, j) + b.get(i, k) * a.get(k, j);
            }
            if band == 0 {
                // The diagonal of a Hermitian operator is real.
                z = Complex64::new(z.re, 0.0);
            }
            out.bands[band][i] = z;
        }
    }
    Ok(out)
}

/// Product state of `n` spins polarized along `±x`, in the Dicke basis.
///
/// The amplitudes are `√(C(N,k)) / 2^{N/2}` with `k = m + N/2`, and an
/// alternating sign `(-1)^k` for the `-x` direction. Binomials are
/// accumulated in log space so large `N` neither overflows nor loses the
/// normalization.
pub fn coherent_state(n_spins: usize, direction: Direction) -> Result<DickeState> {
    if n_spins == 0 {
        return Err(Error::invalid("n_spins must be at least 1"));
    }
    let n = n_spins as f64;
    let mut log_binom = 0.0_f64;
    let mut amplitudes = Vec::with_capacity(n_spins + 1);
    for k in 0..=n_spins {
        if k > 0 {
            log_binom += ((n - k as f64 + 1.0) / k as f64).ln();
        }
        let magnitude = (0.5 * log_binom - 0.5 * n * std::f64::consts::LN_2).exp();
        let sign = match direction {
            Direction::PlusX => 1.0,
            Direction::MinusX => {
                if k % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        amplitudes.push(Complex64::new(sign * magnitude, 0.0));
    }
    DickeState::normalized(n_spins, amplitudes)
}

/// Expectation value `⟨ψ|op|ψ⟩` of a Hermitian operator; the imaginary
/// residue is rounding noise and is dropped.
pub fn expectation(state: &DickeState, op: &CollectiveOperator) -> Result<f64> {
    let image = op.apply(state)?;
    let value: Complex64 = state
        .amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, w)| a.conj() * w)
        .sum();
    Ok(value.re)
}
