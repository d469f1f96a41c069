//! 1→2 qubit cloning with the Buzek-Hillery universal symmetric cloner and a
//! hypothetical perfect cloner.
//!
//! The FLASH functions feed Bob's half of a shared Bell pair through a cloner
//! to test whether Alice's measurement choice becomes visible to him.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector};
use crate::measurement::{conditional_state, Observable};
use crate::rng;
use crate::state::{bloch_of, partial_trace, DensityOperator, PureState, SubsystemLayout, Tensor};

const UNITARY_TOL: f64 = 1e-10;
/// Per-probe shrinking factors must agree to this tolerance.
pub const UNIVERSALITY_TOL: f64 = 1e-8;

/// Computational-basis state of the blank copy or the machine ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    Zero,
    One,
}

impl BasisChoice {
    fn index(self) -> usize {
        match self {
            Self::Zero => 0,
            Self::One => 1,
        }
    }

    fn state(self) -> PureState {
        PureState::basis(2, self.index())
    }
}

/// Joint two-clone state and the two single-clone marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneOutput {
    pub joint: DensityOperator,
    pub clone_a: DensityOperator,
    pub clone_b: DensityOperator,
}

/// Anything that maps a pure qubit to a pair of clones.
pub trait Cloner {
    fn clone_state(&self, psi: &PureState) -> Result<CloneOutput>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum CloningChannel {
    /// Three-qubit unitary acting on `|ψ⟩_A |ω⟩_B |A⟩_C`.
    BuzekHillery {
        unitary: CMatrix,
        blank: BasisChoice,
        ancilla: BasisChoice,
    },
    /// `|ψ⟩ ↦ |ψ⟩|ψ⟩`. Not linear, so not a physical channel; only defined on pure inputs.
    PerfectHypothetical,
}

impl CloningChannel {
    /// Buzek-Hillery machine with blank `|0⟩` and ancilla `|0⟩`.
    pub fn buzek_hillery_default() -> Self {
        buzek_hillery(BasisChoice::Zero, BasisChoice::Zero)
    }

    pub fn perfect() -> Self {
        Self::PerfectHypothetical
    }

    pub fn unitary(&self) -> Option<&CMatrix> {
        match self {
            Self::BuzekHillery { unitary, .. } => Some(unitary),
            Self::PerfectHypothetical => None,
        }
    }

    /// The three-qubit output `U|ψ⟩|ω⟩|A⟩` of the Buzek-Hillery machine.
    pub fn output_state(&self, psi: &PureState) -> Result<Option<PureState>> {
        require_qubit(psi)?;
        let Self::BuzekHillery {
            unitary,
            blank,
            ancilla,
        } = self
        else {
            return Ok(None);
        };
        let input = psi.tensor(&blank.state()).tensor(&ancilla.state());
        let out = unitary * input.amplitudes();
        let out = out.unscale(out.norm());
        Ok(Some(PureState::with_layout(
            out,
            SubsystemLayout::qubits(3),
        )?))
    }
}

impl Cloner for CloningChannel {
    fn clone_state(&self, psi: &PureState) -> Result<CloneOutput> {
        require_qubit(psi)?;
        let joint = match self {
            Self::BuzekHillery { .. } => {
                let out = self
                    .output_state(psi)?
                    .expect("Buzek-Hillery has an output state");
                partial_trace(&out.density(), &[0, 1])?
            }
            Self::PerfectHypothetical => {
                let psi = psi.clone().relabel(SubsystemLayout::single(2))?;
                psi.tensor(&psi).density()
            }
        };
        Ok(CloneOutput {
            clone_a: partial_trace(&joint, &[0])?,
            clone_b: partial_trace(&joint, &[1])?,
            joint,
        })
    }
}

fn require_qubit(psi: &PureState) -> Result<()> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Builds the Buzek-Hillery unitary for the given blank and ancilla states.
///
/// Only the columns for `|0⟩|ω⟩|A⟩` and `|1⟩|ω⟩|A⟩` are fixed:
///
/// ```text
/// |0ωA⟩ ↦  √(2/3)|001⟩ − √(1/6)(|010⟩ + |100⟩)
/// |1ωA⟩ ↦ −√(2/3)|110⟩ + √(1/6)(|011⟩ + |101⟩)
/// ```
///
/// The other six columns are filled by Gram-Schmidt over the computational basis in
/// ascending order. Clone outputs never depend on them.
pub fn buzek_hillery(blank: BasisChoice, ancilla: BasisChoice) -> CloningChannel {
    let big = (2.0_f64 / 3.0).sqrt();
    let small = (1.0_f64 / 6.0).sqrt();
    let ket = |bits: usize| linalg::basis_vector(8, bits);
    let col0 = ket(0b001) * real(big) - (ket(0b010) + ket(0b100)) * real(small);
    let col1 = ket(0b110) * real(-big) + (ket(0b011) + ket(0b101)) * real(small);

    let tail = blank.index() * 2 + ancilla.index();
    let fixed = [(tail, col0), (4 + tail, col1)];

    let mut columns: Vec<Option<CVector>> = vec![None; 8];
    let mut basis: Vec<CVector> = Vec::with_capacity(8);
    for (pos, col) in fixed {
        basis.push(col.clone());
        columns[pos] = Some(col);
    }
    let mut candidates = (0..8).map(ket);
    for slot in columns.iter_mut().filter(|c| c.is_none()) {
        let v = loop {
            let mut v = candidates
                .next()
                .expect("the computational basis spans C^8");
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.dotc(&v);
                    v -= b * overlap;
                }
            }
            let norm = v.norm();
            if norm > 1e-6 {
                break v.unscale(norm);
            }
        };
        basis.push(v.clone());
        *slot = Some(v);
    }
    let cols: Vec<CVector> = columns
        .into_iter()
        .map(|c| c.expect("all slots filled"))
        .collect();
    let unitary = CMatrix::from_columns(&cols);
    debug_assert!(
        linalg::max_abs_diff(&(unitary.adjoint() * &unitary), &linalg::identity(8)) < UNITARY_TOL
    );
    CloningChannel::BuzekHillery {
        unitary,
        blank,
        ancilla,
    }
}

/// `max |U†U − 𝕀|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    linalg::max_abs_diff(&(u.adjoint() * u), &linalg::identity(u.nrows()))
}

/// `F = ⟨ψ|ρ|ψ⟩`.
pub fn single_clone_fidelity(psi: &PureState, clone: &DensityOperator) -> Result<f64> {
    if psi.dim() != clone.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            found: clone.dim(),
        });
    }
    let v = psi.amplitudes();
    let f = v.dotc(&(clone.matrix() * v));
    Ok(f.re.clamp(0.0, 1.0))
}

/// `⟨ψψ|R|ψψ⟩`: overlap of the joint clone state with two perfect copies.
pub fn joint_clone_fidelity(psi: &PureState, joint: &DensityOperator) -> Result<f64> {
    let psi = psi.clone().relabel(SubsystemLayout::single(psi.dim()))?;
    single_clone_fidelity(&psi.tensor(&psi), joint)
}

/// Monte Carlo average of the single-clone fidelities over Haar-random inputs and both
/// clones. Sample `i` draws its input from substream `i` of `seed`.
pub fn average_fidelity<C: Cloner + ?Sized>(c: &C, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut total = 0.0;
    for i in 0..n_samples {
        let psi = PureState::random(2, &mut rng::substream(seed, i as u64));
        let out = c.clone_state(&psi)?;
        total += 0.5
            * (single_clone_fidelity(&psi, &out.clone_a)?
                + single_clone_fidelity(&psi, &out.clone_b)?);
    }
    Ok(total / n_samples as f64)
}

/// The six cardinal points of the Bloch sphere.
pub fn standard_probes() -> Vec<PureState> {
    let minus_i = PureState::normalized(vec![real(FRAC_1_SQRT_2), linalg::c(0.0, -FRAC_1_SQRT_2)])
        .expect("normalized");
    vec![
        PureState::zero(),
        PureState::one(),
        PureState::plus(),
        PureState::minus(),
        PureState::plus_i(),
        minus_i,
    ]
}

/// Fits `r' = η r` between each probe and both of its clones and returns the common `η`.
pub fn shrinking_factor<C: Cloner + ?Sized>(c: &C, probes: &[PureState]) -> Result<f64> {
    let directions: Vec<[f64; 3]> = probes
        .iter()
        .map(|p| bloch_of(&p.density()).map(|r| r.components()))
        .collect::<Result<_>>()?;
    if !spans_space(&directions) {
        return Err(Error::InvalidArgument(
            "probe states must include three non-coplanar Bloch directions".into(),
        ));
    }
    let mut etas = Vec::with_capacity(2 * probes.len());
    for (psi, r) in probes.iter().zip(&directions) {
        let out = c.clone_state(psi)?;
        let rr: f64 = r.iter().map(|x| x * x).sum();
        for clone in [&out.clone_a, &out.clone_b] {
            let rc = bloch_of(clone)?.components();
            let eta = (0..3).map(|k| rc[k] * r[k]).sum::<f64>() / rr;
            let residual = (0..3)
                .map(|k| (rc[k] - eta * r[k]).abs())
                .fold(0.0, f64::max);
            if residual > UNIVERSALITY_TOL {
                return Err(Error::NonUniversal(format!(
                    "clone Bloch vector is not parallel to the input (residual {residual:e})"
                )));
            }
            etas.push(eta);
        }
    }
    let lo = etas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = etas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > UNIVERSALITY_TOL {
        return Err(Error::NonUniversal(format!(
            "shrinking factor varies between {lo} and {hi} across probes"
        )));
    }
    Ok(etas.iter().sum::<f64>() / etas.len() as f64)
}

fn spans_space(dirs: &[[f64; 3]]) -> bool {
    let det = |a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let n = dirs.len();
    (0..n).any(|i| {
        (i + 1..n).any(|j| (j + 1..n).any(|k| det(&dirs[i], &dirs[j], &dirs[k]).abs() > 1e-6))
    })
}

/// What Alice measures on her half of the Bell pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementSetting {
    Sigma3,
    /// `cos φ·σ_3 + sin φ·σ_1`.
    SigmaPhi(f64),
}

impl MeasurementSetting {
    fn observable(&self) -> Result<Observable> {
        match *self {
            Self::Sigma3 => Ok(Observable::sigma_z()),
            Self::SigmaPhi(phi) if phi.is_finite() => Ok(Observable::sigma_phi(phi)),
            Self::SigmaPhi(phi) => {
                Err(Error::InvalidArgument(format!("angle {phi} is not finite")))
            }
        }
    }
}

/// `(|00⟩ + |11⟩)/√2` shared by Alice (subsystem 0) and Bob (subsystem 1).
pub fn bell_pair() -> DensityOperator {
    PureState::normalized(vec![real(1.0), real(0.0), real(0.0), real(1.0)])
        .and_then(|s| s.relabel(SubsystemLayout::qubits(2)))
        .expect("normalized")
        .density()
}

/// Bob's conditional states `(p_x, ρ_{B,x})` for each of Alice's outcomes.
pub fn bob_conditional_states(setting: MeasurementSetting) -> Result<Vec<(f64, DensityOperator)>> {
    let bell = bell_pair();
    setting
        .observable()?
        .spectrum()
        .iter()
        .map(|s| conditional_state(&bell, &s.projector))
        .collect()
}

/// Bob's single-particle state when he does not know Alice's outcome.
pub fn bob_unconditioned_state(setting: MeasurementSetting) -> Result<DensityOperator> {
    let parts = bob_conditional_states(setting)?;
    mixture(&parts)
}

/// Bob's two-qubit state after cloning his conditional state, averaged over Alice's outcomes.
pub fn flash_experiment<C: Cloner + ?Sized>(
    c: &C,
    setting: MeasurementSetting,
) -> Result<DensityOperator> {
    let mut parts = Vec::new();
    for (p, rho_b) in bob_conditional_states(setting)? {
        let psi = rho_b.as_pure(1e-9).ok_or_else(|| {
            Error::InvalidArgument("conditional state of a Bell pair is not pure".into())
        })?;
        parts.push((p, c.clone_state(&psi)?.joint));
    }
    mixture(&parts)
}

fn mixture(parts: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    let (_, first) = parts
        .first()
        .ok_or_else(|| Error::InvalidProbabilities("empty mixture".into()))?;
    let d = first.dim();
    let mut acc = CMatrix::zeros(d, d);
    for (p, rho) in parts {
        acc += rho.matrix() * real(*p);
    }
    DensityOperator::new(linalg::hermitize(&acc), first.layout().clone())
}
