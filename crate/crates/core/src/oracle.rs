//! Small-N full-Hilbert-space brute force.
//!
//! Everything here works on the complete `2^N`-dimensional space of `N`
//! spin-1/2 particles, with no symmetry assumptions, and exists to validate
//! the Dicke-subspace fast path: symmetric-sector projections of full-space
//! operators and dynamics must reproduce the collective simulation, and the
//! dense QFI evaluator here is an independent route against the
//! closed-form completion used in [`crate::qfi`].
//!
//! Basis convention: bit `i` of a basis index is 1 when spin `i` points up,
//! so `S_i^z = +1/2` on set bits. Pair couplings live on lattices of one or
//! two dimensions with `1/r^α` norm envelopes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::collective::DickeState;
use crate::error::{Error, Result};
use crate::protocols::{ProtocolKind, ProtocolSpec};
use crate::qfi::{MixedState, WEIGHT_CUTOFF};

/// Hard cap on full-space sizes; `2^14` dense matrices are the largest this
/// module will materialize.
pub const MAX_FULL_SPINS: usize = 14;

/// A 2x2 single-site operator, indexed `[bit_out][bit_in]` with bit 1 = up.
pub type SiteOp = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli x.
pub fn pauli_x() -> SiteOp {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

/// Pauli y.
pub fn pauli_y() -> SiteOp {
    [[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]]
}

/// Pauli z.
pub fn pauli_z() -> SiteOp {
    [[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

fn scale_site(op: SiteOp, f: f64) -> SiteOp {
    [
        [op[0][0] * f, op[0][1] * f],
        [op[1][0] * f, op[1][1] * f],
    ]
}

/// Single-site spin operator `S^a = σ^a / 2`.
pub fn spin_site(axis: crate::collective::Axis) -> SiteOp {
    use crate::collective::Axis;
    match axis {
        Axis::X => scale_site(pauli_x(), 0.5),
        Axis::Y => scale_site(pauli_y(), 0.5),
        Axis::Z => scale_site(pauli_z(), 0.5),
    }
}

/// One `S^z` site operator per site; the standard metrology generator set.
pub fn sz_site_ops(n_spins: usize) -> Vec<SiteOp> {
    vec![spin_site(crate::collective::Axis::Z); n_spins]
}

fn check_size(n_spins: usize) -> Result<usize> {
    if n_spins == 0 {
        return Err(Error::invalid("n_spins must be at least 1"));
    }
    if n_spins > MAX_FULL_SPINS {
        return Err(Error::ResourceLimit(format!(
            "full-space engine is capped at {MAX_FULL_SPINS} spins, got {n_spins}"
        )));
    }
    Ok(1usize << n_spins)
}

/// A normalized pure state on the full `2^N` space.
#[derive(Debug, Clone)]
pub struct FullState {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl FullState {
    pub fn new(n_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_size(n_spins)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "full state not normalized: sum |a|^2 = {norm_sq:.12e}"
            )));
        }
        Ok(Self { n_spins, amplitudes })
    }

    /// Product state with per-site kets `(down_amp, up_amp)`.
    pub fn product(n_spins: usize, sites: &[(Complex64, Complex64)]) -> Result<Self> {
        let dim = check_size(n_spins)?;
        if sites.len() != n_spins {
            return Err(Error::DimensionMismatch {
                expected: n_spins,
                got: sites.len(),
            });
        }
        let mut amplitudes = Vec::with_capacity(dim);
        for b in 0..dim {
            let mut amp = Complex64::ONE;
            for (i, site) in sites.iter().enumerate() {
                amp *= if (b >> i) & 1 == 1 { site.1 } else { site.0 };
            }
            amplitudes.push(amp);
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n_spins, amplitudes)
    }

    /// All spins polarized along `±x`.
    pub fn polarized_x(n_spins: usize, direction: crate::collective::Direction) -> Result<Self> {
        let r = 1.0 / 2.0_f64.sqrt();
        let up = match direction {
            crate::collective::Direction::PlusX => c(r, 0.0),
            crate::collective::Direction::MinusX => c(-r, 0.0),
        };
        Self::product(n_spins, &vec![(c(r, 0.0), up); n_spins])
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_spins: usize) -> Result<Self> {
        let dim = check_size(n_spins)?;
        let mut amplitudes = vec![Complex64::ZERO; dim];
        let r = c(1.0 / 2.0_f64.sqrt(), 0.0);
        amplitudes[0] = r;
        amplitudes[dim - 1] = r;
        Self::new(n_spins, amplitudes)
    }

    /// Random product state with independently sampled Bloch directions.
    pub fn random_product(n_spins: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let sites: Vec<(Complex64, Complex64)> = (0..n_spins)
            .map(|_| {
                let cos_theta: f64 = rng.random_range(-1.0..1.0);
                let half = (cos_theta.acos()) / 2.0;
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                (
                    c(half.cos(), 0.0),
                    Complex64::from_polar(half.sin(), phi),
                )
            })
            .collect();
        Self::product(n_spins, &sites)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Applies a single-site operator, returning the raw (possibly
    /// unnormalized) image vector.
    pub fn apply_site(&self, site: usize, op: &SiteOp) -> Vec<Complex64> {
        apply_site_to_slice(&self.amplitudes, self.n_spins, site, op)
    }

    /// Exchanges two sites by permuting basis indices.
    pub fn swap_sites(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.n_spins || b >= self.n_spins {
            return Err(Error::invalid("site index out of range"));
        }
        let dim = self.amplitudes.len();
        let mut out = vec![Complex64::ZERO; dim];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let bit_a = (idx >> a) & 1;
            let bit_b = (idx >> b) & 1;
            let mut target = idx & !(1 << a) & !(1 << b);
            target |= bit_b << a;
            target |= bit_a << b;
            out[target] = *amp;
        }
        Self::new(self.n_spins, out)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}

fn apply_site_to_slice(
    v: &[Complex64],
    n_spins: usize,
    site: usize,
    op: &SiteOp,
) -> Vec<Complex64> {
    debug_assert!(site < n_spins);
    let _ = n_spins;
    let mask = 1usize << site;
    let mut out = vec![Complex64::ZERO; v.len()];
    for (b, amp) in v.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let bit = (b >> site) & 1;
        out[b] += op[bit][bit] * amp;
        out[b ^ mask] += op[1 - bit][bit] * amp;
    }
    out
}

/// Lattice geometry of the pair-coupling family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeDimension {
    One,
    Two,
}

/// How pair couplings are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingKind {
    /// The all-to-all y-z cross coupling with a uniform strength set by the
    /// lattice diameter, `J = diam^{-α}`, so every pair respects the
    /// `1/r^α` norm envelope.
    UniformCrossYz,
    /// y-z cross coupling with per-pair norm exactly `j0 / r^α`.
    DistanceCrossYz,
    /// Seeded random two-body Hermitian terms with per-pair norm exactly
    /// `j0 / r^α`.
    RandomTwoBody { seed: u64 },
}

/// Specification of a power-law two-body lattice Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub n_sites: usize,
    pub dimension: LatticeDimension,
    pub alpha: f64,
    pub coupling: CouplingKind,
    pub j0: f64,
}

impl LatticeSpec {
    /// The uniform two-axis-twisting coupling preset on a chain or grid.
    pub fn uniform_twisting(n_sites: usize, dimension: LatticeDimension, alpha: f64) -> Self {
        Self {
            n_sites,
            dimension,
            alpha,
            coupling: CouplingKind::UniformCrossYz,
            // each pair term groups both orderings; its norm is 4J
            j0: 4.0,
        }
    }

    /// Nearest-neighbor-only coupling: the `α → ∞` limit of the power law.
    pub fn nearest_neighbor(n_sites: usize, dimension: LatticeDimension) -> Self {
        Self {
            n_sites,
            dimension,
            alpha: f64::INFINITY,
            coupling: CouplingKind::DistanceCrossYz,
            j0: 1.0,
        }
    }

    pub fn random_two_body(
        n_sites: usize,
        dimension: LatticeDimension,
        alpha: f64,
        seed: u64,
    ) -> Self {
        Self {
            n_sites,
            dimension,
            alpha,
            coupling: CouplingKind::RandomTwoBody { seed },
            j0: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        check_size(self.n_sites)?;
        if self.n_sites < 2 {
            return Err(Error::invalid("a lattice needs at least 2 sites"));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::invalid("alpha must be non-negative"));
        }
        if !(self.j0 > 0.0) || !self.j0.is_finite() {
            return Err(Error::invalid("j0 must be positive and finite"));
        }
        Ok(())
    }

    /// Site coordinates; a chain for 1-D, a near-square grid for 2-D.
    fn positions(&self) -> Vec<(f64, f64)> {
        match self.dimension {
            LatticeDimension::One => (0..self.n_sites).map(|i| (i as f64, 0.0)).collect(),
            LatticeDimension::Two => {
                let width = (self.n_sites as f64).sqrt().ceil() as usize;
                (0..self.n_sites)
                    .map(|i| ((i % width) as f64, (i / width) as f64))
                    .collect()
            }
        }
    }
}

/// One unordered pair term `h_{ij}`, stored as a 4x4 matrix on the
/// `(bit_i, bit_j)` pair space with index `2·bit_i + bit_j`.
#[derive(Debug, Clone)]
pub struct PairTerm {
    pub site_i: usize,
    pub site_j: usize,
    pub distance: f64,
    pub matrix: [[Complex64; 4]; 4],
    pub norm: f64,
}

/// A validated lattice Hamiltonian: pair terms plus their norm envelope.
#[derive(Debug, Clone)]
pub struct LatticeHamiltonian {
    spec: LatticeSpec,
    terms: Vec<PairTerm>,
}

fn operator_norm_4(m: &[[Complex64; 4]; 4]) -> f64 {
    let dense = DMatrix::from_fn(4, 4, |i, j| m[i][j]);
    let eig = nalgebra::linalg::SymmetricEigen::new(dense);
    eig.eigenvalues.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()))
}

/// `σ_i^y σ_j^z + σ_i^z σ_j^y` on the pair space.
fn cross_yz_pair() -> [[Complex64; 4]; 4] {
    let sy = pauli_y();
    let sz = pauli_z();
    let mut out = [[Complex64::ZERO; 4]; 4];
    for bi_out in 0..2 {
        for bj_out in 0..2 {
            for bi_in in 0..2 {
                for bj_in in 0..2 {
                    out[2 * bi_out + bj_out][2 * bi_in + bj_in] = sy[bi_out][bi_in]
                        * sz[bj_out][bj_in]
                        + sz[bi_out][bi_in] * sy[bj_out][bj_in];
                }
            }
        }
    }
    out
}

fn random_hermitian_pair(rng: &mut ChaCha8Rng) -> [[Complex64; 4]; 4] {
    let mut raw = [[Complex64::ZERO; 4]; 4];
    for row in &mut raw {
        for entry in row.iter_mut() {
            *entry = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
    }
    let mut herm = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            herm[i][j] = (raw[i][j] + raw[j][i].conj()) * 0.5;
        }
    }
    herm
}

fn scale_pair(m: &[[Complex64; 4]; 4], f: f64) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[i][j] * f;
        }
    }
    out
}

/// Builds and validates the pair terms of a lattice spec.
///
/// Every term's operator norm is checked numerically against the
/// `j0 / r^α` envelope.
pub fn build_lattice(spec: &LatticeSpec) -> Result<LatticeHamiltonian> {
    spec.validate()?;
    let positions = spec.positions();
    let diameter = {
        let mut max = 1.0_f64;
        for i in 0..spec.n_sites {
            for j in (i + 1)..spec.n_sites {
                let (dx, dy) = (positions[i].0 - positions[j].0, positions[i].1 - positions[j].1);
                max = max.max((dx * dx + dy * dy).sqrt());
            }
        }
        max
    };
    let mut terms = Vec::new();
    for i in 0..spec.n_sites {
        for j in (i + 1)..spec.n_sites {
            let (dx, dy) = (positions[i].0 - positions[j].0, positions[i].1 - positions[j].1);
            let r = (dx * dx + dy * dy).sqrt();
            let matrix = match spec.coupling {
                CouplingKind::UniformCrossYz => {
                    // both orderings of the ordered-pair sum: 2J per pair
                    let strength = 2.0 * diameter.powf(-spec.alpha);
                    scale_pair(&cross_yz_pair(), strength)
                }
                CouplingKind::DistanceCrossYz => {
                    let strength = spec.j0 / r.powf(spec.alpha) / 2.0;
                    scale_pair(&cross_yz_pair(), strength)
                }
                CouplingKind::RandomTwoBody { seed } => {
                    let mut pair_rng = ChaCha8Rng::seed_from_u64(
                        seed ^ ((i as u64) << 32) ^ (j as u64).rotate_left(17),
                    );
                    let herm = random_hermitian_pair(&mut pair_rng);
                    let norm = operator_norm_4(&herm);
                    let target = spec.j0 / r.powf(spec.alpha);
                    if norm == 0.0 || !target.is_finite() && target != 0.0 {
                        scale_pair(&herm, 0.0)
                    } else {
                        scale_pair(&herm, target / norm)
                    }
                }
            };
            let norm = operator_norm_4(&matrix);
            let envelope = spec.j0 / r.powf(spec.alpha);
            if norm > envelope * (1.0 + 1e-9) {
                return Err(Error::InvariantViolation(format!(
                    "pair ({i},{j}) at r={r}: norm {norm:.6e} exceeds envelope {envelope:.6e}"
                )));
            }
            if norm > 0.0 {
                terms.push(PairTerm {
                    site_i: i,
                    site_j: j,
                    distance: r,
                    matrix,
                    norm,
                });
            }
        }
    }
    Ok(LatticeHamiltonian { spec: *spec, terms })
}

impl LatticeHamiltonian {
    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[PairTerm] {
        &self.terms
    }

    /// `v = max_i Σ_j ‖h_ij‖`, the interaction rate entering the
    /// correlation envelope `C_ij ≲ v t`.
    pub fn interaction_rate(&self) -> f64 {
        let mut per_site = vec![0.0_f64; self.spec.n_sites];
        for term in &self.terms {
            per_site[term.site_i] += term.norm;
            per_site[term.site_j] += term.norm;
        }
        per_site.into_iter().fold(0.0, f64::max)
    }

    /// Dense `2^N` matrix of the summed pair terms.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.spec.n_sites;
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for term in &self.terms {
            let (mi, mj) = (1usize << term.site_i, 1usize << term.site_j);
            for b in 0..dim {
                let s_in = 2 * ((b >> term.site_i) & 1) + ((b >> term.site_j) & 1);
                for bi_out in 0..2usize {
                    for bj_out in 0..2usize {
                        let s_out = 2 * bi_out + bj_out;
                        let z = term.matrix[s_out][s_in];
                        if z.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut target = b & !mi & !mj;
                        target |= bi_out * mi + bj_out * mj;
                        h[(target, b)] += z;
                    }
                }
            }
        }
        h
    }
}

/// Dense power-law lattice Hamiltonian (validated against the norm
/// envelope at build time).
pub fn full_hamiltonian(spec: &LatticeSpec) -> Result<DMatrix<Complex64>> {
    Ok(build_lattice(spec)?.to_dense())
}

/// Dense collective operator `S_a = Σ_i S_i^a` on the full space.
pub fn full_collective(axis: crate::collective::Axis, n_spins: usize) -> Result<DMatrix<Complex64>> {
    let dim = check_size(n_spins)?;
    let op = spin_site(axis);
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for site in 0..n_spins {
        let mask = 1usize << site;
        for b in 0..dim {
            let bit = (b >> site) & 1;
            h[(b, b)] += op[bit][bit];
            h[(b ^ mask, b)] += op[1 - bit][bit];
        }
    }
    Ok(h)
}

/// The same protocol Hamiltonians as the Dicke-space builder, assembled on
/// the full space from sums of single-site operators.
pub fn full_protocol_hamiltonian(spec: &ProtocolSpec) -> Result<DMatrix<Complex64>> {
    use crate::collective::Axis;
    check_size(spec.n_spins())?;
    let sy = full_collective(Axis::Y, spec.n_spins())?;
    let sz = full_collective(Axis::Z, spec.n_spins())?;
    let chi = spec.chi();
    Ok(match spec.kind() {
        ProtocolKind::Tat => (&sy * &sz + &sz * &sy) * c(chi, 0.0),
        ProtocolKind::Oat => (&sz * &sz) * c(chi, 0.0),
        ProtocolKind::Tnt => {
            let sx = full_collective(Axis::X, spec.n_spins())?;
            &sz * &sz * c(chi, 0.0) - sx * c(spec.b_field().unwrap_or_default(), 0.0)
        }
    })
}

/// Spectral decomposition of a dense Hermitian matrix, reusable across
/// evolution times.
pub struct FullSpectral {
    eigenvalues: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl FullSpectral {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::invalid("matrix must be square"));
        }
        let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max).max(1.0);
        let herm_residual = (0..h.nrows())
            .flat_map(|i| (0..h.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| (h[(i, j)] - h[(j, i)].conj()).norm())
            .fold(0.0_f64, f64::max);
        if herm_residual > 1e-9 * scale {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian (residual {herm_residual:.3e})"
            )));
        }
        let eig = nalgebra::linalg::SymmetricEigen::new(h.clone());
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn evolve(&self, state: &FullState, t: f64) -> Result<FullState> {
        if !t.is_finite() {
            return Err(Error::invalid("evolution time must be finite"));
        }
        let dim = self.vectors.nrows();
        if state.amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: state.amplitudes.len(),
            });
        }
        let psi = DVector::from_column_slice(&state.amplitudes);
        let mut coeffs = self.vectors.ad_mul(&psi);
        for (k, coeff) in coeffs.iter_mut().enumerate() {
            *coeff *= Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        let out = &self.vectors * coeffs;
        FullState::new(state.n_spins, out.iter().copied().collect())
    }
}

/// One-shot exact evolution `e^{-iHt}ψ` by dense spectral decomposition.
pub fn full_evolve(h: &DMatrix<Complex64>, state: &FullState, t: f64) -> Result<FullState> {
    FullSpectral::new(h)?.evolve(state, t)
}

/// Rows of the symmetric-sector isometry: row `k` is the normalized sum of
/// all basis states with `k` up spins (`m = k - N/2`), matching the Dicke
/// basis ordering.
pub fn symmetric_sector_basis(n_spins: usize) -> Result<DMatrix<Complex64>> {
    let dim = check_size(n_spins)?;
    let mut counts = vec![0u64; n_spins + 1];
    for b in 0..dim {
        counts[b.count_ones() as usize] += 1;
    }
    let mut p = DMatrix::<Complex64>::zeros(n_spins + 1, dim);
    for b in 0..dim {
        let k = b.count_ones() as usize;
        p[(k, b)] = c(1.0 / (counts[k] as f64).sqrt(), 0.0);
    }
    Ok(p)
}

/// Projects a full-space operator into the symmetric sector: `P H P†`.
pub fn project_to_sector(h: &DMatrix<Complex64>, n_spins: usize) -> Result<DMatrix<Complex64>> {
    let p = symmetric_sector_basis(n_spins)?;
    if h.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            got: h.nrows(),
        });
    }
    Ok(&p * h * p.adjoint())
}

/// Embeds a Dicke state into the full space.
pub fn embed_dicke(state: &DickeState) -> Result<FullState> {
    let p = symmetric_sector_basis(state.n_spins())?;
    let psi = DVector::from_column_slice(state.amplitudes());
    let full = p.adjoint() * psi;
    FullState::new(state.n_spins(), full.iter().copied().collect())
}

/// Projects a full state onto the symmetric sector, returning the Dicke
/// amplitudes (unnormalized) and the weight captured by the sector.
pub fn project_state(state: &FullState) -> Result<(Vec<Complex64>, f64)> {
    let p = symmetric_sector_basis(state.n_spins)?;
    let psi = DVector::from_column_slice(&state.amplitudes);
    let reduced = &p * psi;
    let weight: f64 = reduced.iter().map(|z| z.norm_sqr()).sum();
    Ok((reduced.iter().copied().collect(), weight))
}

/// Transverse second moments of a full-space state, via the dense
/// collective operators; the full-space counterpart of
/// [`crate::qfi::transverse_covariance`].
pub fn transverse_covariance_full(
    state: &FullState,
) -> Result<crate::qfi::TransverseCovariance> {
    let n = state.n_spins;
    let sy = full_collective(crate::collective::Axis::Y, n)?;
    let sz = full_collective(crate::collective::Axis::Z, n)?;
    let psi = DVector::from_column_slice(&state.amplitudes);
    let wy = &sy * &psi;
    let wz = &sz * &psi;
    Ok(crate::qfi::TransverseCovariance {
        syy: wy.iter().map(|z| z.norm_sqr()).sum(),
        szz: wz.iter().map(|z| z.norm_sqr()).sum(),
        cross: 2.0
            * wy.iter()
                .zip(wz.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>(),
    })
}

/// All two-body connected correlations `C_ij = ⟨A_iA_j⟩ − ⟨A_i⟩⟨A_j⟩`
/// (diagonal included) and their sum, which is the variance of `Σ_i A_i`.
pub fn connected_correlations(
    state: &FullState,
    site_ops: &[SiteOp],
) -> Result<(DMatrix<f64>, f64)> {
    let n = state.n_spins;
    if site_ops.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: site_ops.len(),
        });
    }
    let images: Vec<Vec<Complex64>> = (0..n).map(|i| state.apply_site(i, &site_ops[i])).collect();
    let means: Vec<f64> = images
        .iter()
        .map(|img| {
            state
                .amplitudes
                .iter()
                .zip(img)
                .map(|(a, w)| (a.conj() * w).re)
                .sum()
        })
        .collect();
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let second: Complex64 = images[i]
                .iter()
                .zip(&images[j])
                .map(|(x, y)| x.conj() * y)
                .sum();
            let value = second.re - means[i] * means[j];
            matrix[(i, j)] = value;
            matrix[(j, i)] = value;
        }
    }
    let total = matrix.sum();
    Ok((matrix, total))
}

/// Dense mixed-state QFI by direct eigendecomposition of ρ and the full
/// double sum over eigenpairs, null space included. This is the
/// independent reference route for [`crate::qfi::qfi_mixed`].
pub fn qfi_dense(rho: &DMatrix<Complex64>, generator: &DMatrix<Complex64>) -> Result<f64> {
    let dim = rho.nrows();
    if rho.ncols() != dim || generator.nrows() != dim || generator.ncols() != dim {
        return Err(Error::invalid("rho and generator must be square and equal-sized"));
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(rho.clone());
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&w| if w > WEIGHT_CUTOFF { w } else { 0.0 })
        .collect();
    let overlap = eig.eigenvectors.ad_mul(&(generator * &eig.eigenvectors));
    let mut f = 0.0;
    for mu in 0..dim {
        for nu in 0..dim {
            let sum = weights[mu] + weights[nu];
            if sum > 0.0 {
                let diff = weights[mu] - weights[nu];
                f += diff * diff / sum * overlap[(mu, nu)].norm_sqr();
            }
        }
    }
    Ok(2.0 * f)
}

/// Dense density matrix `Σ_μ λ_μ |λ_μ⟩⟨λ_μ|` of a component mixture.
pub fn rho_dense(mixed: &MixedState) -> DMatrix<Complex64> {
    let dim = mixed.dim();
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, comp) in mixed.weights().iter().zip(mixed.components()) {
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += comp[i] * comp[j].conj() * c(*w, 0.0);
            }
        }
    }
    rho
}

/// Pure-state QFI on the full space for the generator `Σ_i A_i`.
pub fn qfi_bruteforce_pure(state: &FullState, site_ops: &[SiteOp]) -> Result<f64> {
    let n = state.n_spins;
    if site_ops.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: site_ops.len(),
        });
    }
    let dim = state.amplitudes.len();
    let mut image = vec![Complex64::ZERO; dim];
    for i in 0..n {
        let part = state.apply_site(i, &site_ops[i]);
        for (acc, z) in image.iter_mut().zip(part) {
            *acc += z;
        }
    }
    let second: f64 = image.iter().map(|z| z.norm_sqr()).sum();
    let first: f64 = state
        .amplitudes
        .iter()
        .zip(&image)
        .map(|(a, w)| (a.conj() * w).re)
        .sum();
    Ok(4.0 * (second - first * first))
}

/// Mixed-state QFI with a dense generator, via [`qfi_dense`].
pub fn qfi_bruteforce_mixed(
    mixed: &MixedState,
    generator: &DMatrix<Complex64>,
) -> Result<f64> {
    if mixed.dim() > 4096 {
        return Err(Error::ResourceLimit(format!(
            "dense mixed-state QFI capped at dimension 4096, got {}",
            mixed.dim()
        )));
    }
    qfi_dense(&rho_dense(mixed), generator)
}

/// Report of the correlation-envelope trend check.
///
/// For each size the worst observed `max_{i≠j} |C_ij(t)| / (v t)` is
/// recorded; the check passes when that ratio shows no systematic growth
/// with `N` (relative fitted slope at most `threshold`).
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub sizes: Vec<usize>,
    pub max_ratio_per_size: Vec<f64>,
    pub relative_slope: f64,
    pub threshold: f64,
    pub trials: usize,
    pub pass: bool,
}

/// Sizes swept by [`correlation_envelope_check`].
pub const ENVELOPE_SIZES: [usize; 4] = [4, 6, 8, 10];

/// Empirical check that early-time correlations stay inside the `v·t`
/// envelope uniformly in system size.
///
/// The spec's `n_sites` is ignored; sizes 4, 6, 8, 10 are swept with
/// `trials` random product initial states each, evolved across `t_grid`.
pub fn correlation_envelope_check(
    template: &LatticeSpec,
    t_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<EnvelopeReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if t_grid.iter().any(|&t| !t.is_finite() || t < 0.0) {
        return Err(Error::invalid("time grid must be finite and non-negative"));
    }
    if !t_grid.iter().any(|&t| t > 0.0) {
        return Err(Error::invalid("time grid needs at least one positive time"));
    }
    let mut max_ratio_per_size = Vec::with_capacity(ENVELOPE_SIZES.len());
    for (size_index, &n) in ENVELOPE_SIZES.iter().enumerate() {
        let spec = LatticeSpec {
            n_sites: n,
            ..*template
        };
        let lattice = build_lattice(&spec)?;
        let rate = lattice.interaction_rate();
        let spectral = FullSpectral::new(&lattice.to_dense())?;
        let ops = sz_site_ops(n);
        let mut worst = 0.0_f64;
        for trial in 0..trials {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ ((size_index as u64) << 48) ^ trial as u64);
            let initial = FullState::random_product(n, &mut rng)?;
            for &t in t_grid.iter().filter(|&&t| t > 0.0) {
                let state = spectral.evolve(&initial, t)?;
                let (corr, _) = connected_correlations(&state, &ops)?;
                let mut max_off = 0.0_f64;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            max_off = max_off.max(corr[(i, j)].abs());
                        }
                    }
                }
                worst = worst.max(max_off / (rate * t));
            }
        }
        max_ratio_per_size.push(worst);
    }

    // OLS slope of ratio against N, scaled by the mean-to-mean ratio so
    // the pass criterion is scale free.
    let xs: Vec<f64> = ENVELOPE_SIZES.iter().map(|&n| n as f64).collect();
    let mean_x: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
    let mean_y: f64 = max_ratio_per_size.iter().sum::<f64>() / max_ratio_per_size.len() as f64;
    let cov: f64 = xs
        .iter()
        .zip(&max_ratio_per_size)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let slope = cov / var;
    let relative_slope = slope * mean_x / mean_y.max(f64::MIN_POSITIVE);
    let threshold = 0.1;
    Ok(EnvelopeReport {
        sizes: ENVELOPE_SIZES.to_vec(),
        max_ratio_per_size,
        relative_slope,
        threshold,
        trials,
        pass: relative_slope <= threshold,
    })
}
