use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{PureState, SubsystemLayout};
use crate::error::{DensityDiagnostic, Error, Result};
use crate::linalg::{self, c, real, CMatrix};

/// Thresholds used when validating a candidate density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTolerance {
    pub hermitian: f64,
    pub trace: f64,
    /// Smallest eigenvalue must be `≥ −eigenvalue`.
    pub eigenvalue: f64,
}

impl Default for DensityTolerance {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-12,
            eigenvalue: 1e-10,
        }
    }
}

impl DensityTolerance {
    pub fn uniform(tol: f64) -> Self {
        Self {
            hermitian: tol,
            trace: tol,
            eigenvalue: tol,
        }
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn check_density_operator(
    m: &CMatrix,
    tol: &DensityTolerance,
) -> std::result::Result<(), DensityDiagnostic> {
    if m.nrows() != m.ncols() {
        return Err(DensityDiagnostic::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let deviation = linalg::hermitian_deviation(m);
    if deviation > tol.hermitian {
        return Err(DensityDiagnostic::NotHermitian { deviation });
    }
    let trace = linalg::trace(m);
    if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
        return Err(DensityDiagnostic::TraceNotOne { trace: trace.re });
    }
    let min_eigenvalue = linalg::hermitian_eigenvalues(&linalg::hermitize(m))
        .first()
        .copied()
        .unwrap_or(0.0);
    if min_eigenvalue < -tol.eigenvalue {
        return Err(DensityDiagnostic::Negative { min_eigenvalue });
    }
    Ok(())
}

/// `true` iff `m` is Hermitian, unit-trace and positive semidefinite within `tol`.
pub fn is_density_operator(m: &CMatrix, tol: f64) -> bool {
    check_density_operator(m, &DensityTolerance::uniform(tol)).is_ok()
}

/// Hermitian, positive semidefinite, unit-trace operator together with its tensor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    layout: SubsystemLayout,
}

impl DensityOperator {
    /// Validates `matrix` against the default tolerances.
    pub fn new(matrix: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: matrix.nrows(),
            });
        }
        check_density_operator(&matrix, &DensityTolerance::default())
            .map_err(Error::NotDensityOperator)?;
        Ok(Self { matrix, layout })
    }

    /// For operators that are density operators by construction (mixtures of pure states,
    /// partial traces, tensor products). Skips the eigenvalue check, which is cubic in the
    /// dimension.
    pub(crate) fn from_trusted(matrix: CMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.total_dim());
        debug_assert!(linalg::hermitian_deviation(&matrix) < 1e-9);
        debug_assert!((linalg::trace(&matrix).re - 1.0).abs() < 1e-9);
        Self { matrix, layout }
    }

    /// `𝕀/d` on the given layout.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        Self::from_trusted(linalg::identity(d) * real(1.0 / d as f64), layout)
    }

    /// Random full-rank state `GG†/Tr[GG†]` with `G` a complex Ginibre matrix.
    pub fn random<R: Rng + ?Sized>(layout: SubsystemLayout, rng: &mut R) -> Self {
        let d = layout.total_dim();
        let g = CMatrix::from_fn(d, d, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let gg = &g * g.adjoint();
        let tr = linalg::trace(&gg).re;
        Self::from_trusted(linalg::hermitize(&(gg * real(1.0 / tr))), layout)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(&self.matrix, &self.matrix).re
    }

    /// Eigenvector of the largest eigenvalue, as a pure state, if `ρ` is rank one within `tol`.
    pub fn as_pure(&self, tol: f64) -> Option<PureState> {
        if (self.purity() - 1.0).abs() > tol {
            return None;
        }
        let (_, v) = linalg::hermitian_eigen(&self.matrix).pop()?;
        let v = v.unscale(v.norm());
        Some(PureState::from_parts(v, self.layout.clone()))
    }

    /// Same operator viewed under another layout of equal total dimension.
    pub fn relabel(self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: layout.total_dim(),
            });
        }
        Ok(Self { layout, ..self })
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson::from_matrix(&self.matrix, self.layout.dims())
    }

    pub fn from_json(json: &OperatorJson) -> Result<Self> {
        let layout = SubsystemLayout::new(json.dims.clone())?;
        Self::new(json.to_matrix()?, layout)
    }
}

/// `Σ_k p_k |ψ_k⟩⟨ψ_k|`.
pub fn from_ensemble(members: &[(f64, PureState)]) -> Result<DensityOperator> {
    let (_, first) = members
        .first()
        .ok_or_else(|| Error::InvalidProbabilities("ensemble has no members".into()))?;
    let layout = first.layout().clone();
    let dim = first.dim();
    let mut total = 0.0;
    for (p, psi) in members {
        if psi.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: psi.dim(),
            });
        }
        if !(p.is_finite() && *p >= 0.0) {
            return Err(Error::InvalidProbabilities(format!(
                "weight {p} is negative or not finite"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilities(format!(
            "weights sum to {total}"
        )));
    }
    let mut acc = CMatrix::zeros(dim, dim);
    for (p, psi) in members {
        linalg::add_weighted_outer(&mut acc, *p, psi.amplitudes());
    }
    Ok(DensityOperator::from_trusted(acc, layout))
}

/// Traces out every subsystem not listed in `keep`. The result's layout lists the kept
/// subsystems in ascending index order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let layout = rho.layout();
    let n = layout.len();
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems(
            "must keep at least one subsystem".into(),
        ));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidSubsystems(format!(
            "index {bad} out of range for {n} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let kept_layout = layout.select(&kept);
    if traced.is_empty() {
        return Ok(DensityOperator::from_trusted(
            rho.matrix().clone(),
            kept_layout,
        ));
    }
    let traced_layout = layout.select(&traced);
    let strides = layout.strides();

    // full index offset contributed by each multi-index of the kept and traced groups
    let offsets = |group: &[usize], sub: &SubsystemLayout| -> Vec<usize> {
        let sub_strides = sub.strides();
        (0..sub.total_dim())
            .map(|flat| {
                group
                    .iter()
                    .zip(sub.dims().iter().zip(sub_strides.iter()))
                    .map(|(&k, (&d, &s))| ((flat / s) % d) * strides[k])
                    .sum()
            })
            .collect()
    };
    let kept_off = offsets(&kept, &kept_layout);
    let traced_off = offsets(&traced, &traced_layout);

    let dk = kept_layout.total_dim();
    let mut out = CMatrix::zeros(dk, dk);
    let m = rho.matrix();
    for j in 0..dk {
        for i in 0..dk {
            let mut acc = linalg::ZERO;
            for &t in &traced_off {
                acc += m[(kept_off[i] + t, kept_off[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityOperator::from_trusted(
        linalg::hermitize(&out),
        kept_layout,
    ))
}

/// `½ Σ|λ_i|` over the eigenvalues of `ρ − σ`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let diff = linalg::hermitize(&(rho.matrix() - sigma.matrix()));
    let sum: f64 = linalg::hermitian_eigenvalues(&diff)
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Debug/fixture serialization of an operator: `{dims, re, im}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn from_matrix(m: &CMatrix, dims: &[usize]) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dims: dims.to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        let well_formed = self.im.len() == n
            && self
                .re
                .iter()
                .chain(self.im.iter())
                .all(|row| row.len() == n);
        if !well_formed {
            return Err(Error::InvalidArgument(
                "re/im must be square arrays of equal size".into(),
            ));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            c(self.re[i][j], self.im[i][j])
        }))
    }
}
