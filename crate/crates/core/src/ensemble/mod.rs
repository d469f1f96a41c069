//! Ensembles as preparation procedures.
//!
//! Three kinds of procedure are modelled. All of them can share the same
//! single-particle operator while differing in their `m`-particle window
//! operators:
//!
//! * [`IidEnsemble`]: every particle independently drawn from `{p_k, ψ_k}`.
//! * [`SequenceEnsemble`]: a fixed periodic pattern started at a uniformly
//!   random offset (correlated successive preparations).
//! * [`FiniteCompositionEnsemble`]: exactly known counts of each state, in
//!   uniformly random order.

mod file;

pub use file::{EnsembleDefinition, EnsembleKind, Registry};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measurement::{collective_sigma_z, expectation};
use crate::rng;
use crate::state::{
    from_ensemble, tensor_all, DensityOperator, PureState, SubsystemLayout, Tensor,
};

/// Largest window handled by [`Ensemble::window_operator`].
pub const MAX_WINDOW: usize = 12;
/// Largest fixed-composition ensemble whose windows are enumerated exactly.
pub const MAX_FINITE_ENUMERATION: usize = 12;

fn require_qubit(psi: &PureState) -> Result<()> {
    if psi.dim() != 2 {
        return Err(Error::EnsembleDefinition(format!(
            "ensemble members must be qubit states, found dimension {}",
            psi.dim()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IidEnsemble {
    members: Vec<(f64, PureState)>,
}

impl IidEnsemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        for (_, psi) in &members {
            require_qubit(psi)?;
        }
        // validates weights
        from_ensemble(&members)?;
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceEnsemble {
    pattern: Vec<PureState>,
}

impl SequenceEnsemble {
    pub fn new(pattern: Vec<PureState>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EnsembleDefinition(
                "sequence pattern is empty".into(),
            ));
        }
        for psi in &pattern {
            require_qubit(psi)?;
        }
        Ok(Self { pattern })
    }

    pub fn pattern(&self) -> &[PureState] {
        &self.pattern
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    /// `m` consecutive states starting at `offset`, wrapping around the period.
    fn window(&self, offset: usize, m: usize) -> impl Iterator<Item = &PureState> {
        (0..m).map(move |i| &self.pattern[(offset + i) % self.pattern.len()])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteCompositionEnsemble {
    counts: Vec<(PureState, usize)>,
    n_total: usize,
}

impl FiniteCompositionEnsemble {
    pub fn new(counts: Vec<(PureState, usize)>) -> Result<Self> {
        for (psi, _) in &counts {
            require_qubit(psi)?;
        }
        let n_total: usize = counts.iter().map(|(_, n)| n).sum();
        if n_total == 0 {
            return Err(Error::EnsembleDefinition(
                "composition has no particles".into(),
            ));
        }
        Ok(Self { counts, n_total })
    }

    pub fn counts(&self) -> &[(PureState, usize)] {
        &self.counts
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Visits every ordered draw of `m` particles without replacement, grouped by which
    /// entry of `counts` each draw came from. `weight` is the exact probability of the
    /// sequence: `Π_k n_k(n_k−1)… / N(N−1)…`.
    fn for_each_draw(&self, m: usize, mut visit: impl FnMut(f64, &[usize])) {
        fn recurse(
            remaining: &mut [usize],
            left: usize,
            depth: usize,
            weight: f64,
            path: &mut Vec<usize>,
            visit: &mut dyn FnMut(f64, &[usize]),
        ) {
            if depth == 0 {
                visit(weight, path);
                return;
            }
            for k in 0..remaining.len() {
                if remaining[k] == 0 {
                    continue;
                }
                let w = weight * remaining[k] as f64 / left as f64;
                remaining[k] -= 1;
                path.push(k);
                recurse(remaining, left - 1, depth - 1, w, path, visit);
                path.pop();
                remaining[k] += 1;
            }
        }
        let mut remaining: Vec<usize> = self.counts.iter().map(|(_, n)| *n).collect();
        recurse(
            &mut remaining,
            self.n_total,
            m,
            1.0,
            &mut Vec::with_capacity(m),
            &mut visit,
        );
    }
}

/// A preparation procedure for a stream of qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    Iid(IidEnsemble),
    Sequence(SequenceEnsemble),
    FiniteComposition(FiniteCompositionEnsemble),
}

/// First and second moments of the collective `Σ_z` over an `m`-particle window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaZMoments {
    pub mean: f64,
    pub second_moment: f64,
}

impl Ensemble {
    pub fn iid(members: Vec<(f64, PureState)>) -> Result<Self> {
        IidEnsemble::new(members).map(Self::Iid)
    }

    pub fn sequence(pattern: Vec<PureState>) -> Result<Self> {
        SequenceEnsemble::new(pattern).map(Self::Sequence)
    }

    pub fn finite(counts: Vec<(PureState, usize)>) -> Result<Self> {
        FiniteCompositionEnsemble::new(counts).map(Self::FiniteComposition)
    }

    /// Random spins along z: `{½, |0⟩; ½, |1⟩}` drawn independently.
    pub fn e1() -> Self {
        Self::iid(vec![(0.5, PureState::zero()), (0.5, PureState::one())]).expect("valid")
    }

    /// Random spins along x: `{½, |↑⟩; ½, |↓⟩}` drawn independently, with `|↑⟩, |↓⟩ = |±⟩`.
    pub fn e2() -> Self {
        Self::iid(vec![(0.5, PureState::plus()), (0.5, PureState::minus())]).expect("valid")
    }

    /// Alternating z spins `|1⟩|0⟩|1⟩|0⟩…` with a random starting offset.
    pub fn e3() -> Self {
        Self::sequence(vec![PureState::one(), PureState::zero()]).expect("valid")
    }

    /// Alternating x spins `|↑⟩|↓⟩|↑⟩|↓⟩…` with a random starting offset.
    pub fn e4() -> Self {
        Self::sequence(vec![PureState::plus(), PureState::minus()]).expect("valid")
    }

    /// Exactly `n/2` photons in `|0⟩` and `n/2` in `|1⟩`, randomly ordered.
    pub fn e5(n: usize) -> Result<Self> {
        Self::half_and_half(n, PureState::zero(), PureState::one())
    }

    /// Exactly `n/2` photons in `|+⟩` and `n/2` in `|−⟩`, randomly ordered.
    pub fn e6(n: usize) -> Result<Self> {
        Self::half_and_half(n, PureState::plus(), PureState::minus())
    }

    fn half_and_half(n: usize, a: PureState, b: PureState) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "ensemble size must be even and at least 2, got {n}"
            )));
        }
        Self::finite(vec![(a, n / 2), (b, n / 2)])
    }

    /// The single-particle statistical operator.
    pub fn single_particle_operator(&self) -> DensityOperator {
        let members: Vec<(f64, PureState)> = match self {
            Self::Iid(e) => e.members.clone(),
            Self::Sequence(e) => {
                let w = 1.0 / e.period() as f64;
                e.pattern.iter().map(|psi| (w, psi.clone())).collect()
            }
            Self::FiniteComposition(e) => e
                .counts
                .iter()
                .map(|(psi, n)| (*n as f64 / e.n_total as f64, psi.clone()))
                .collect(),
        };
        from_ensemble(&members).expect("ensemble weights are validated at construction")
    }

    /// Statistical operator of `m` consecutive particles.
    pub fn window_operator(&self, m: usize) -> Result<DensityOperator> {
        if !(1..=MAX_WINDOW).contains(&m) {
            return Err(Error::OutOfRange {
                what: "window size",
                value: m,
                min: 1,
                max: MAX_WINDOW,
            });
        }
        match self {
            Self::Iid(_) => {
                let rho1 = self.single_particle_operator();
                Ok(tensor_all(std::iter::repeat_n(&rho1, m)).expect("m ≥ 1"))
            }
            Self::Sequence(e) => {
                let w = 1.0 / e.period() as f64;
                let members: Vec<(f64, PureState)> = (0..e.period())
                    .map(|offset| (w, tensor_all(e.window(offset, m)).expect("m ≥ 1")))
                    .collect();
                from_ensemble(&members)
            }
            Self::FiniteComposition(e) => {
                if e.n_total > MAX_FINITE_ENUMERATION {
                    return Err(Error::OutOfRange {
                        what: "composition size",
                        value: e.n_total,
                        min: 1,
                        max: MAX_FINITE_ENUMERATION,
                    });
                }
                if m > e.n_total {
                    return Err(Error::OutOfRange {
                        what: "window size",
                        value: m,
                        min: 1,
                        max: e.n_total,
                    });
                }
                let dim = 1usize << m;
                let mut acc = CMatrix::zeros(dim, dim);
                e.for_each_draw(m, |weight, path| {
                    let state = path
                        .iter()
                        .map(|&k| e.counts[k].0.clone())
                        .reduce(|a, b| a.tensor(&b))
                        .expect("m ≥ 1");
                    linalg::add_weighted_outer(&mut acc, weight, state.amplitudes());
                });
                Ok(DensityOperator::from_trusted(
                    acc,
                    SubsystemLayout::qubits(m),
                ))
            }
        }
    }

    /// `⟨Σ_z⟩` and `⟨Σ_z²⟩` over an `m`-particle window.
    pub fn sigma_z_moments(&self, m: usize) -> Result<SigmaZMoments> {
        let rho = self.window_operator(m)?;
        let sz = collective_sigma_z(m)?;
        Ok(SigmaZMoments {
            mean: expectation(&rho, &sz, 1)?,
            second_moment: expectation(&rho, &sz, 2)?,
        })
    }

    /// `n` successive preparations, reproducible from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<PureState>> {
        self.sample_with(n, &mut rng::from_seed(seed))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<PureState>> {
        let palette = self.palette();
        Ok(self
            .sample_indices_with(n, rng)?
            .into_iter()
            .map(|k| palette[k].clone())
            .collect())
    }

    /// The distinct member states a sample is drawn from. [`Ensemble::sample_indices_with`]
    /// indexes into this list.
    pub fn palette(&self) -> Vec<&PureState> {
        match self {
            Self::Iid(e) => e.members.iter().map(|(_, s)| s).collect(),
            Self::Sequence(e) => e.pattern.iter().collect(),
            Self::FiniteComposition(e) => e.counts.iter().map(|(s, _)| s).collect(),
        }
    }

    /// Like [`Ensemble::sample_with`], but returns palette indices instead of states.
    pub fn sample_indices_with<R: Rng + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        match self {
            Self::Iid(e) => Ok((0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    for (k, (p, _)) in e.members.iter().enumerate() {
                        acc += p;
                        if u < acc {
                            return k;
                        }
                    }
                    e.members.len() - 1
                })
                .collect()),
            Self::Sequence(e) => {
                let offset = rng.random_range(0..e.period());
                Ok((0..n).map(|i| (offset + i) % e.period()).collect())
            }
            Self::FiniteComposition(e) => {
                if n != e.n_total {
                    return Err(Error::InvalidArgument(format!(
                        "a fixed-composition ensemble of {} particles cannot yield {n}",
                        e.n_total
                    )));
                }
                let mut out: Vec<usize> = e
                    .counts
                    .iter()
                    .enumerate()
                    .flat_map(|(k, (_, count))| std::iter::repeat_n(k, *count))
                    .collect();
                out.shuffle(rng);
                Ok(out)
            }
        }
    }

    /// Number of particles a single sample must contain, if fixed.
    pub fn fixed_size(&self) -> Option<usize> {
        match self {
            Self::FiniteComposition(e) => Some(e.n_total),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{is_density_operator, partial_trace, tensor, trace_distance};

    fn half() -> DensityOperator {
        DensityOperator::maximally_mixed(SubsystemLayout::single(2))
    }

    #[test]
    fn single_particle_operators_are_half_identity() {
        for e in [
            Ensemble::e1(),
            Ensemble::e2(),
            Ensemble::e3(),
            Ensemble::e4(),
        ] {
            assert!(trace_distance(&e.single_particle_operator(), &half()).unwrap() < 1e-15);
        }
        for n in [2, 4, 10, 100] {
            for e in [Ensemble::e5(n).unwrap(), Ensemble::e6(n).unwrap()] {
                assert!(trace_distance(&e.single_particle_operator(), &half()).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn e3_three_window() {
        let s101 = tensor_all(&[PureState::one(), PureState::zero(), PureState::one()]).unwrap();
        let s010 = tensor_all(&[PureState::zero(), PureState::one(), PureState::zero()]).unwrap();
        let expected = from_ensemble(&[(0.5, s101), (0.5, s010)]).unwrap();
        let got = Ensemble::e3().window_operator(3).unwrap();
        assert!(linalg::max_abs_diff(got.matrix(), expected.matrix()) < 1e-16);
        assert_eq!(got.layout().dims(), &[2, 2, 2]);
    }

    #[test]
    fn e4_two_window_matches_offset_mixture() {
        let up_down = tensor(&PureState::plus(), &PureState::minus());
        let down_up = tensor(&PureState::minus(), &PureState::plus());
        // brute-force mixture entry by entry
        let mut oracle = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                oracle[(i, j)] = (up_down.amplitudes()[i] * up_down.amplitudes()[j].conj()
                    + down_up.amplitudes()[i] * down_up.amplitudes()[j].conj())
                    * 0.5;
            }
        }
        let got = Ensemble::e4().window_operator(2).unwrap();
        assert!(linalg::max_abs_diff(got.matrix(), &oracle) < 1e-15);
    }

    #[test]
    fn iid_windows_are_maximally_mixed() {
        for m in 1..=5 {
            let got = Ensemble::e2().window_operator(m).unwrap();
            let expected = DensityOperator::maximally_mixed(SubsystemLayout::qubits(m));
            assert!(linalg::max_abs_diff(got.matrix(), expected.matrix()) < 1e-15);
        }
    }

    #[test]
    fn moment_tables() {
        let cases = [(2, 0.0, 2.0), (3, 1.0, 3.0), (5, 1.0, 5.0)];
        for (m, e3, e4) in cases {
            let a = Ensemble::e3().sigma_z_moments(m).unwrap();
            let b = Ensemble::e4().sigma_z_moments(m).unwrap();
            assert!(a.mean.abs() < 1e-12 && b.mean.abs() < 1e-12);
            assert!((a.second_moment - e3).abs() < 1e-12, "E3 m={m}");
            assert!((b.second_moment - e4).abs() < 1e-12, "E4 m={m}");
        }
    }

    #[test]
    fn finite_window_is_exact_hypergeometric_mixture() {
        // N = 4, two |0⟩ and two |1⟩: P(00) = 2/4·1/3 = 1/6, P(01) = 2/4·2/3 = 1/3
        let rho = Ensemble::e5(4).unwrap().window_operator(2).unwrap();
        let d: Vec<f64> = rho.matrix().diagonal().iter().map(|z| z.re).collect();
        let expected = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        for (x, y) in d.iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }
        // anti-correlation lowers ⟨Σ_z²⟩ below the i.i.d. value m
        let mom = Ensemble::e5(4).unwrap().sigma_z_moments(2).unwrap();
        assert!((mom.second_moment - 4.0 / 3.0).abs() < 1e-12);
        let full = Ensemble::e5(4).unwrap().sigma_z_moments(4).unwrap();
        assert!(full.second_moment.abs() < 1e-12);
    }

    #[test]
    fn window_guards() {
        assert!(Ensemble::e3().window_operator(0).is_err());
        assert!(Ensemble::e3().window_operator(13).is_err());
        assert!(Ensemble::e5(4).unwrap().window_operator(5).is_err());
        assert!(Ensemble::e5(14).unwrap().window_operator(2).is_err());
        assert!(Ensemble::e5(3).is_err());
    }

    #[test]
    fn windows_reduce_to_single_particle_operator() {
        let all = [
            Ensemble::e1(),
            Ensemble::e2(),
            Ensemble::e3(),
            Ensemble::e4(),
            Ensemble::e5(6).unwrap(),
            Ensemble::e6(6).unwrap(),
            Ensemble::iid(vec![
                (0.3, PureState::real_qubit(0.2)),
                (0.7, PureState::plus_i()),
            ])
            .unwrap(),
            Ensemble::sequence(vec![
                PureState::zero(),
                PureState::plus(),
                PureState::plus_i(),
            ])
            .unwrap(),
        ];
        for e in &all {
            let rho1 = e.single_particle_operator();
            for m in 2..=4 {
                let w = e.window_operator(m).unwrap();
                assert!(is_density_operator(w.matrix(), 1e-10));
                let reduced = partial_trace(&w, &[0]).unwrap();
                assert!(trace_distance(&reduced, &rho1).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn samples_have_expected_structure() {
        let e5 = Ensemble::e5(4).unwrap();
        for seed in 0..200 {
            let s = e5.sample(4, seed).unwrap();
            let zeros = s
                .iter()
                .filter(|p| p.fidelity(&PureState::zero()) > 0.5)
                .count();
            assert_eq!(zeros, 2);
        }
        assert!(e5.sample(5, 0).is_err());
        assert_eq!(
            Ensemble::e3().sample(6, 9).unwrap(),
            Ensemble::e3().sample(6, 9).unwrap()
        );
    }

    #[test]
    fn e3_offsets_split_evenly_across_seeds() {
        let seeds = 10_000u64;
        let starts_with_one = (0..seeds)
            .filter(|&s| {
                let v = Ensemble::e3().sample(4, s).unwrap();
                let one_first = v[0] == PureState::one();
                let alternates = v.windows(2).all(|w| w[0] != w[1]);
                assert!(alternates);
                one_first
            })
            .count() as f64;
        let sigma = (seeds as f64 * 0.25).sqrt();
        assert!((starts_with_one - seeds as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn iid_sample_frequency_converges() {
        let n = 20_000;
        let s = Ensemble::e1().sample(n, 1234).unwrap();
        let zeros = s.iter().filter(|p| **p == PureState::zero()).count() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((zeros - n as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn rejects_non_qubit_members() {
        assert!(Ensemble::sequence(vec![PureState::basis(3, 0)]).is_err());
        assert!(Ensemble::sequence(vec![]).is_err());
        assert!(Ensemble::finite(vec![(PureState::zero(), 0)]).is_err());
    }
}
