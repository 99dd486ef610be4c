//! Exact time evolution of Dicke states under a time-independent Hamiltonian.
//!
//! Every Hamiltonian here is Hermitian and banded, so we diagonalize once
//! and evolve by phase rotation in the eigenbasis: `ψ(t) = V e^{-iΛt} V† ψ`.
//! The factorization is the only cubic-cost step; each subsequent evolution
//! is two matrix-vector products (or one, through [`Propagator`]), which is
//! what makes dense time scans and optimal-time searches cheap.
//!
//! Tridiagonal Hamiltonians (all three squeezing protocols) take a fast
//! path: a diagonal phase rotation turns a Hermitian tridiagonal matrix into
//! a real symmetric one, which diagonalizes in real arithmetic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::collective::{CollectiveOperator, DickeState};
use crate::error::{Error, Result};

/// Spectral decomposition `H = V Λ V†` of a collective Hamiltonian.
///
/// Eigenvalues are sorted ascending; `vectors` holds the eigenvectors as
/// columns in the same order.
#[derive(Debug, Clone)]
pub struct SpectralForm {
    n_spins: usize,
    eigenvalues: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl SpectralForm {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Max deviation of `V†V` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        let dim = self.dim();
        let gram = self.vectors.ad_mul(&self.vectors);
        let mut max = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                max = max.max((gram[(i, j)] - expected).norm());
            }
        }
        max
    }
}

fn sort_ascending(eigenvalues: Vec<f64>, vectors: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let sorted_vals = order.iter().map(|&k| eigenvalues[k]).collect();
    let dim = vectors.nrows();
    let sorted_vecs = DMatrix::from_fn(dim, dim, |i, j| vectors[(i, order[j])]);
    (sorted_vals, sorted_vecs)
}

/// Full spectral decomposition of a Hermitian collective operator.
///
/// Deterministic up to rotations inside degenerate subspaces, which leave
/// the propagator `e^{-iHt}` unchanged.
pub fn diagonalize(hamiltonian: &CollectiveOperator) -> Result<SpectralForm> {
    let dim = hamiltonian.dim();
    for b in 0..=hamiltonian.half_bandwidth() {
        for i in 0..dim - b {
            let z = hamiltonian.get(i, i + b);
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::invalid("non-finite Hamiltonian element"));
            }
        }
    }
    let n_spins = hamiltonian.n_spins();

    let (eigenvalues, vectors) = match hamiltonian.half_bandwidth() {
        0 => {
            let vals: Vec<f64> = (0..dim).map(|i| hamiltonian.get(i, i).re).collect();
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            let sorted: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
            let vecs = DMatrix::from_fn(dim, dim, |i, j| {
                if i == order[j] {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            });
            (sorted, vecs)
        }
        1 => {
            // Phase-rotate the Hermitian tridiagonal into a real symmetric
            // tridiagonal: u_{k+1} = u_k h_k / |h_k| maps the subdiagonal
            // onto its modulus, and V = diag(u)† V_real restores phases.
            let mut phases = vec![Complex64::ONE; dim];
            for i in 0..dim - 1 {
                let h = hamiltonian.get(i, i + 1);
                let r = h.norm();
                phases[i + 1] = if r > 0.0 {
                    phases[i] * (h / r)
                } else {
                    phases[i]
                };
            }
            let mut real = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                real[(i, i)] = hamiltonian.get(i, i).re;
                if i + 1 < dim {
                    let e = hamiltonian.get(i, i + 1).norm();
                    real[(i, i + 1)] = e;
                    real[(i + 1, i)] = e;
                }
            }
            let eig = nalgebra::linalg::SymmetricEigen::new(real);
            let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            let vecs = DMatrix::from_fn(dim, dim, |i, j| {
                phases[i].conj() * eig.eigenvectors[(i, j)]
            });
            sort_ascending(vals, vecs)
        }
        _ => {
            let eig = nalgebra::linalg::SymmetricEigen::new(hamiltonian.to_dense());
            let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            sort_ascending(vals, eig.eigenvectors)
        }
    };

    Ok(SpectralForm {
        n_spins,
        eigenvalues,
        vectors,
    })
}

/// A reusable evolution of one initial state under one spectral form.
///
/// Projects the state onto the eigenbasis once, so each [`Propagator::at`]
/// costs a single matrix-vector product.
pub struct Propagator<'a> {
    spectral: &'a SpectralForm,
    coefficients: DVector<Complex64>,
}

impl<'a> Propagator<'a> {
    pub fn new(spectral: &'a SpectralForm, state: &DickeState) -> Result<Self> {
        if state.n_spins() != spectral.n_spins {
            return Err(Error::SpinCountMismatch {
                expected: spectral.n_spins,
                got: state.n_spins(),
            });
        }
        let psi = DVector::from_column_slice(state.amplitudes());
        let coefficients = spectral.vectors.ad_mul(&psi);
        Ok(Self {
            spectral,
            coefficients,
        })
    }

    /// The evolved state at time `t` (units of the Hamiltonian's inverse
    /// energy scale).
    pub fn at(&self, t: f64) -> Result<DickeState> {
        if !t.is_finite() {
            return Err(Error::invalid("evolution time must be finite"));
        }
        let dim = self.spectral.dim();
        let rotated = DVector::from_fn(dim, |k, _| {
            let phase = Complex64::from_polar(1.0, -self.spectral.eigenvalues[k] * t);
            self.coefficients[k] * phase
        });
        let psi = &self.spectral.vectors * rotated;
        DickeState::new(self.spectral.n_spins, psi.iter().copied().collect())
    }
}

/// Evolves a state to a single time: `V e^{-iΛt} V† ψ`.
pub fn evolve(spectral: &SpectralForm, state: &DickeState, t: f64) -> Result<DickeState> {
    Propagator::new(spectral, state)?.at(t)
}

/// Evolves a state across an ascending time grid, reusing one projection.
pub fn evolve_series(
    spectral: &SpectralForm,
    state: &DickeState,
    t_grid: &[f64],
) -> Result<Vec<DickeState>> {
    for pair in t_grid.windows(2) {
        if !(pair[0] <= pair[1]) {
            return Err(Error::invalid("time grid must be ascending"));
        }
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid must be finite"));
    }
    let propagator = Propagator::new(spectral, state)?;
    t_grid.iter().map(|&t| propagator.at(t)).collect()
}
