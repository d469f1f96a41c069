//! Projective measurements: spectral decomposition, Born statistics, moments,
//! state update and conditional states of an unmeasured subsystem.
//!
//! Observables that are diagonal in the computational basis (Pauli Z, the
//! collective `Σ_z`) are stored by their diagonal and their eigenprojectors by
//! the basis indices they span, so 12-qubit collective observables never
//! materialize `4096×4096` projectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector};
use crate::state::{DensityOperator, PureState, SubsystemLayout};

/// Clustering tolerance for degenerate eigenvalues.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
/// Outcomes less likely than this have no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Largest register handled by [`collective_sigma_z`].
pub const MAX_COLLECTIVE_QUBITS: usize = 12;

const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// An orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// Projector onto the span of computational basis vectors.
    Basis {
        dim: usize,
        indices: Vec<usize>,
    },
    Dense(CMatrix),
}

impl Projector {
    /// `|ψ⟩⟨ψ|`.
    pub fn onto(psi: &PureState) -> Self {
        Self::Dense(linalg::outer(psi.amplitudes()))
    }

    /// Validates that `m` is Hermitian and idempotent.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotProjector("matrix is not square".into()));
        }
        let herm = linalg::hermitian_deviation(&m);
        if herm > HERMITIAN_INPUT_TOL {
            return Err(Error::NotProjector(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let idem = linalg::max_abs_diff(&(&m * &m), &m);
        if idem > HERMITIAN_INPUT_TOL {
            return Err(Error::NotProjector(format!("P² ≠ P (deviation {idem:e})")));
        }
        Ok(Self::Dense(m))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Basis { dim, .. } => *dim,
            Self::Dense(m) => m.nrows(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Basis { indices, .. } => indices.len(),
            Self::Dense(m) => linalg::trace(m).re.round() as usize,
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        match self {
            Self::Basis { dim, indices } => {
                let mut m = CMatrix::zeros(*dim, *dim);
                for &i in indices {
                    m[(i, i)] = linalg::ONE;
                }
                m
            }
            Self::Dense(m) => m.clone(),
        }
    }

    /// `Tr[ρ P]`.
    pub fn weight_in(&self, rho: &CMatrix) -> f64 {
        match self {
            Self::Basis { indices, .. } => indices.iter().map(|&i| rho[(i, i)].re).sum(),
            Self::Dense(p) => linalg::trace_of_product(rho, p).re,
        }
    }

    /// `P|ψ⟩`.
    pub fn apply(&self, v: &CVector) -> CVector {
        match self {
            Self::Basis { dim, indices } => {
                let mut out = CVector::zeros(*dim);
                for &i in indices {
                    out[i] = v[i];
                }
                out
            }
            Self::Dense(p) => p * v,
        }
    }
}

/// One spectral cluster: eigenvalue and the projector onto its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProjector {
    pub value: f64,
    pub projector: Projector,
}

#[derive(Debug, Clone, PartialEq)]
enum Operator {
    Diagonal(Vec<f64>),
    Dense(CMatrix),
}

/// A Hermitian operator with its spectral decomposition computed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    operator: Operator,
    spectrum: Vec<SpectralProjector>,
}

impl Observable {
    pub fn dim(&self) -> usize {
        match &self.operator {
            Operator::Diagonal(d) => d.len(),
            Operator::Dense(m) => m.nrows(),
        }
    }

    /// Eigenvalue clusters in descending order of eigenvalue.
    pub fn spectrum(&self) -> &[SpectralProjector] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|s| s.value).collect()
    }

    pub fn to_matrix(&self) -> CMatrix {
        match &self.operator {
            Operator::Diagonal(d) => {
                CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| real(x))))
            }
            Operator::Dense(m) => m.clone(),
        }
    }

    /// Single-qubit `σ_3`.
    pub fn sigma_z() -> Self {
        Self::from_diagonal(vec![1.0, -1.0], DEFAULT_DEGENERACY_TOL)
    }

    /// Single-qubit `cos φ·σ_3 + sin φ·σ_1`.
    pub fn sigma_phi(phi: f64) -> Self {
        spectral_decompose(&linalg::sigma_phi(phi), DEFAULT_DEGENERACY_TOL)
            .expect("σ_φ is Hermitian")
    }

    fn from_diagonal(diag: Vec<f64>, degeneracy_tol: f64) -> Self {
        let dim = diag.len();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| diag[b].total_cmp(&diag[a]).then(a.cmp(&b)));
        let clusters = cluster(order.iter().map(|&i| (diag[i], i)), degeneracy_tol);
        let spectrum = clusters
            .into_iter()
            .map(|(value, mut indices)| {
                indices.sort_unstable();
                SpectralProjector {
                    value,
                    projector: Projector::Basis { dim, indices },
                }
            })
            .collect();
        Self {
            operator: Operator::Diagonal(diag),
            spectrum,
        }
    }
}

/// Groups `(eigenvalue, item)` pairs sorted by descending eigenvalue into clusters whose
/// consecutive members differ by at most `tol`. Each cluster's value is its mean.
fn cluster<T>(sorted: impl Iterator<Item = (f64, T)>, tol: f64) -> Vec<(f64, Vec<T>)> {
    let mut out: Vec<(f64, f64, Vec<T>)> = Vec::new();
    for (value, item) in sorted {
        match out.last_mut() {
            Some((last, sum, items)) if (*last - value).abs() <= tol => {
                *last = value;
                *sum += value;
                items.push(item);
            }
            _ => out.push((value, value, vec![item])),
        }
    }
    out.into_iter()
        .map(|(_, sum, items)| (sum / items.len() as f64, items))
        .collect()
}

/// Spectral decomposition `M = Σ_x x·P_x`, merging eigenvalues closer than `degeneracy_tol`.
pub fn spectral_decompose(m: &CMatrix, degeneracy_tol: f64) -> Result<Observable> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let deviation = linalg::hermitian_deviation(m);
    if deviation > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(deviation));
    }
    if linalg::is_diagonal(m) {
        return Ok(Observable::from_diagonal(
            m.diagonal().iter().map(|z| z.re).collect(),
            degeneracy_tol,
        ));
    }
    let m = linalg::hermitize(m);
    let mut pairs = linalg::hermitian_eigen(&m);
    pairs.reverse();
    let dim = m.nrows();
    let spectrum = cluster(pairs.into_iter(), degeneracy_tol)
        .into_iter()
        .map(|(value, vectors)| {
            let mut p = CMatrix::zeros(dim, dim);
            for v in &vectors {
                linalg::add_weighted_outer(&mut p, 1.0, v);
            }
            SpectralProjector {
                value,
                projector: Projector::Dense(linalg::hermitize(&p)),
            }
        })
        .collect();
    Ok(Observable {
        operator: Operator::Dense(m),
        spectrum,
    })
}

/// Outcome probabilities, one entry per spectral cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub entries: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    pub fn probability_of(&self, value: f64, tol: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|(x, _)| (x - value).abs() <= tol)
            .map(|&(_, p)| p)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|(x, p)| x * p).sum()
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Born rule: `p_x = Tr[ρ P_x]`.
pub fn born(rho: &DensityOperator, x: &Observable) -> Result<OutcomeDistribution> {
    check_dims(x.dim(), rho.dim())?;
    let entries = x
        .spectrum
        .iter()
        .map(|s| {
            let p = s.projector.weight_in(rho.matrix());
            (s.value, if p < 0.0 { 0.0 } else { p.min(1.0) })
        })
        .collect();
    Ok(OutcomeDistribution { entries })
}

/// `Tr[ρ X^k]`, with `X^k` built by repeated multiplication.
pub fn expectation(rho: &DensityOperator, x: &Observable, k: u32) -> Result<f64> {
    check_dims(x.dim(), rho.dim())?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "moment order must be positive".into(),
        ));
    }
    let value = match &x.operator {
        Operator::Diagonal(d) => {
            let m = rho.matrix();
            d.iter()
                .enumerate()
                .map(|(i, &xi)| {
                    let mut pow = xi;
                    for _ in 1..k {
                        pow *= xi;
                    }
                    m[(i, i)] * pow
                })
                .sum::<num_complex::Complex64>()
        }
        Operator::Dense(op) => {
            let mut pow = op.clone();
            for _ in 1..k {
                pow = &pow * op;
            }
            linalg::trace_of_product(rho.matrix(), &pow)
        }
    };
    debug_assert!(value.im.abs() <= 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

/// Post-measurement state `P|ψ⟩/√p` and its probability `p = ‖P|ψ⟩‖²`.
pub fn project(psi: &PureState, p: &Projector) -> Result<(f64, PureState)> {
    check_dims(p.dim(), psi.dim())?;
    let v = p.apply(psi.amplitudes());
    let prob = v.norm_squared();
    if prob < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(prob));
    }
    let state = PureState::from_parts(v.unscale(prob.sqrt()), psi.layout().clone());
    Ok((prob.min(1.0), state))
}

/// Outcome probability `p = Tr[ρ_AB (P⊗𝕀)]` and the conditional state
/// `Tr_A[ρ_AB (P⊗𝕀)]/p` of everything but the first subsystem.
pub fn conditional_state(
    rho_ab: &DensityOperator,
    p: &Projector,
) -> Result<(f64, DensityOperator)> {
    let dims = rho_ab.layout().dims();
    if dims.len() < 2 {
        return Err(Error::InvalidSubsystems(
            "conditional state needs a layout with at least two subsystems".into(),
        ));
    }
    let da = dims[0];
    check_dims(da, p.dim())?;
    let rest = SubsystemLayout::new(dims[1..].to_vec())?;
    let db = rest.total_dim();
    let pm = p.to_matrix();
    let m = rho_ab.matrix();
    let mut out = CMatrix::zeros(db, db);
    for b in 0..db {
        for b2 in 0..db {
            let mut acc = linalg::ZERO;
            for a in 0..da {
                for a2 in 0..da {
                    let pa = pm[(a2, a)];
                    if pa != linalg::ZERO {
                        acc += m[(a * db + b, a2 * db + b2)] * pa;
                    }
                }
            }
            out[(b, b2)] = acc;
        }
    }
    let prob = linalg::trace(&out).re;
    if prob < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(prob));
    }
    let state = DensityOperator::new(linalg::hermitize(&(out * real(1.0 / prob))), rest)?;
    Ok((prob.min(1.0), state))
}

/// `Σ_z = Σ_j σ_z^{(j)}` on `m` qubits: diagonal with entry `#zeros − #ones` per basis string.
pub fn collective_sigma_z(m: usize) -> Result<Observable> {
    if !(1..=MAX_COLLECTIVE_QUBITS).contains(&m) {
        return Err(Error::OutOfRange {
            what: "qubit count",
            value: m,
            min: 1,
            max: MAX_COLLECTIVE_QUBITS,
        });
    }
    let diag = (0..1usize << m)
        .map(|i| {
            let ones = i.count_ones() as i64;
            (m as i64 - 2 * ones) as f64
        })
        .collect();
    Ok(Observable::from_diagonal(diag, DEFAULT_DEGENERACY_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{from_ensemble, partial_trace, tensor, trace_distance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> DensityOperator {
        PureState::normalized(vec![real(1.0), real(0.0), real(0.0), real(1.0)])
            .unwrap()
            .relabel(SubsystemLayout::qubits(2))
            .unwrap()
            .density()
    }

    #[test]
    fn sigma_z_spectrum() {
        let z = spectral_decompose(&linalg::sigma_z(), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(z.eigenvalues(), vec![1.0, -1.0]);
        assert_eq!(
            z.spectrum()[0].projector.to_matrix(),
            PureState::zero().density().matrix().clone()
        );
        assert_eq!(
            z.spectrum()[1].projector.to_matrix(),
            PureState::one().density().matrix().clone()
        );
    }

    #[test]
    fn identity_is_measuring_nothing() {
        let id = spectral_decompose(&linalg::identity(2), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(id.eigenvalues(), vec![1.0]);
        assert_eq!(id.spectrum()[0].projector.to_matrix(), linalg::identity(2));
    }

    #[test]
    fn two_qubit_collective_z() {
        let sz = collective_sigma_z(2).unwrap();
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![
            real(2.0),
            real(0.0),
            real(0.0),
            real(-2.0),
        ]));
        assert_eq!(sz.to_matrix(), expect);
        assert_eq!(sz.eigenvalues(), vec![2.0, 0.0, -2.0]);
        assert_eq!(sz.spectrum()[1].projector.rank(), 2);
    }

    #[test]
    fn collective_z_matches_basis_enumeration() {
        assert_eq!(
            collective_sigma_z(1).unwrap().to_matrix(),
            linalg::sigma_z()
        );
        // enumerate the 8 strings b0 b1 b2 and count +1 for each 0 and −1 for each 1
        let mut oracle = Vec::new();
        for b0 in 0..2 {
            for b1 in 0..2 {
                for b2 in 0..2 {
                    let spin = |b: i32| if b == 0 { 1.0 } else { -1.0 };
                    oracle.push(spin(b0) + spin(b1) + spin(b2));
                }
            }
        }
        assert_eq!(oracle, vec![3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0]);
        let d: Vec<f64> = collective_sigma_z(3)
            .unwrap()
            .to_matrix()
            .diagonal()
            .iter()
            .map(|z| z.re)
            .collect();
        assert_eq!(d, oracle);
        assert!(collective_sigma_z(0).is_err());
        assert!(collective_sigma_z(13).is_err());
    }

    #[test]
    fn dense_degenerate_spectrum() {
        // σ_x ⊗ 𝕀 has two doubly degenerate eigenvalues
        let m = linalg::kron(&linalg::sigma_x(), &linalg::identity(2));
        let obs = spectral_decompose(&m, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(obs.spectrum().len(), 2);
        assert!((obs.eigenvalues()[0] - 1.0).abs() < 1e-12);
        let mut rebuilt = CMatrix::zeros(4, 4);
        for s in obs.spectrum() {
            assert_eq!(s.projector.rank(), 2);
            rebuilt += s.projector.to_matrix() * real(s.value);
        }
        assert!(linalg::max_abs_diff(&rebuilt, &m) < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(0.0), real(0.0)]);
        assert!(matches!(
            spectral_decompose(&m, 1e-8),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn born_examples() {
        let z = Observable::sigma_z();
        let d = born(&PureState::plus().density(), &z).unwrap();
        assert!((d.probability_of(1.0, 1e-12).unwrap() - 0.5).abs() < 1e-15);
        assert!((d.probability_of(-1.0, 1e-12).unwrap() - 0.5).abs() < 1e-15);
        let d = born(&PureState::zero().density(), &z).unwrap();
        assert_eq!(d.entries, vec![(1.0, 1.0), (-1.0, 0.0)]);
        assert!(born(&bell(), &z).is_err());
    }

    #[test]
    fn born_e4_pair_matches_enumeration() {
        // |+−⟩ = ½(|00⟩ − |01⟩ + |10⟩ − |11⟩): each basis outcome has weight ¼, and
        // Σ_z takes values 2, 0, 0, −2 on them
        let state = tensor(&PureState::plus(), &PureState::minus());
        let rho = from_ensemble(&[
            (0.5, state),
            (0.5, tensor(&PureState::minus(), &PureState::plus())),
        ])
        .unwrap();
        let d = born(&rho, &collective_sigma_z(2).unwrap()).unwrap();
        assert!((d.probability_of(2.0, 1e-9).unwrap() - 0.25).abs() < 1e-14);
        assert!((d.probability_of(0.0, 1e-9).unwrap() - 0.5).abs() < 1e-14);
        assert!((d.probability_of(-2.0, 1e-9).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn expectation_examples() {
        let half = DensityOperator::maximally_mixed(SubsystemLayout::single(2));
        assert_eq!(expectation(&half, &Observable::sigma_z(), 1).unwrap(), 0.0);
        assert!(expectation(&half, &Observable::sigma_z(), 0).is_err());
        let x = Observable::sigma_phi(std::f64::consts::FRAC_PI_2);
        assert!((expectation(&PureState::plus().density(), &x, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation(&PureState::zero().density(), &x, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn project_examples() {
        let p0 = Projector::onto(&PureState::zero());
        let (p, s) = project(&PureState::plus(), &p0).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!((s.fidelity(&PureState::zero()) - 1.0).abs() < 1e-15);
        let (p, _) = project(&PureState::zero(), &p0).unwrap();
        assert_eq!(p, 1.0);
        let p1 = Projector::onto(&PureState::one());
        assert!(matches!(
            project(&PureState::zero(), &p1),
            Err(Error::ZeroProbability(_))
        ));
    }

    #[test]
    fn projector_validation() {
        assert!(Projector::from_matrix(linalg::sigma_x()).is_err());
        assert!(Projector::from_matrix(PureState::plus().density().into_matrix()).is_ok());
    }

    #[test]
    fn bell_conditional_states() {
        let (p, rho_b) = conditional_state(&bell(), &Projector::onto(&PureState::zero())).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(linalg::max_abs_diff(rho_b.matrix(), PureState::zero().density().matrix()) < 1e-15);

        let phi = 0.7;
        let obs = Observable::sigma_phi(phi);
        let up = &obs.spectrum()[0];
        let (p, rho_b) = conditional_state(&bell(), &up.projector).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let along = PureState::real_qubit(phi / 2.0);
        assert!(trace_distance(&rho_b, &along.density()).unwrap() < 1e-12);
    }

    #[test]
    fn product_state_has_no_back_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = DensityOperator::random(SubsystemLayout::single(2), &mut rng);
        let b = DensityOperator::random(SubsystemLayout::single(2), &mut rng);
        let proj = Projector::onto(&PureState::real_qubit(0.4));
        let (p, rho_b) = conditional_state(&tensor(&a, &b), &proj).unwrap();
        assert!((p - proj.weight_in(a.matrix())).abs() < 1e-14);
        assert!(linalg::max_abs_diff(rho_b.matrix(), b.matrix()) < 1e-13);
        let marginal = partial_trace(&tensor(&a, &b), &[1]).unwrap();
        assert!(trace_distance(&marginal, &b).unwrap() < 1e-13);
    }

    #[test]
    fn conditional_state_errors() {
        let single = PureState::zero().density();
        assert!(conditional_state(&single, &Projector::onto(&PureState::zero())).is_err());
        let zero_prob = PureState::normalized(vec![real(0.0), real(0.0), real(0.0), real(1.0)])
            .unwrap()
            .relabel(SubsystemLayout::qubits(2))
            .unwrap()
            .density();
        assert!(matches!(
            conditional_state(&zero_prob, &Projector::onto(&PureState::zero())),
            Err(Error::ZeroProbability(_))
        ));
    }
}
