//! Reduced dynamics of the search walk on the star graph and numeric
//! predictions for node search on starified complete graphs.
//!
//! On the star with `M` edges, center `u0`, marked edge `(u0, u1)` and every
//! `+` pole at the center, all unmarked edges share one amplitude pair
//! `(alpha_plus, alpha_minus)`. The walk then collapses to four complex
//! numbers; the `(alpha_plus, alpha_minus, psi_plus)` part evolves by a 3x3
//! matrix `A` with eigenvalues `-1, e^{+i lambda}, e^{-i lambda}`.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{complete, star, starify, PolarityMap};
use crate::walk::{SweepReport, Walk, WalkError, WalkState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("star analysis needs at least 2 edges, got {0}")]
    StarTooSmall(usize),
    #[error("complete-graph analysis needs at least 3 nodes, got {0}")]
    CompleteTooSmall(usize),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

fn check_m(m: usize) -> Result<(), SpectralError> {
    if m < 2 {
        return Err(SpectralError::StarTooSmall(m));
    }
    Ok(())
}

/// The four distinct amplitudes of the walk on the star.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarReducedState {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub psi_plus: Complex64,
    pub psi_minus: Complex64,
    pub m: usize,
    pub t: usize,
}

impl StarReducedState {
    /// Values of the diagonal initial state, `1/sqrt(2M)` everywhere.
    pub fn initial(m: usize) -> Result<Self, SpectralError> {
        check_m(m)?;
        let a = Complex64::new(1.0 / (2.0 * m as f64).sqrt(), 0.0);
        Ok(StarReducedState {
            alpha_plus: a,
            alpha_minus: a,
            psi_plus: a,
            psi_minus: a,
            m,
            t: 0,
        })
    }

    pub fn zero(m: usize) -> Result<Self, SpectralError> {
        check_m(m)?;
        let z = Complex64::default();
        Ok(StarReducedState {
            alpha_plus: z,
            alpha_minus: z,
            psi_plus: z,
            psi_minus: z,
            m,
            t: 0,
        })
    }

    /// One step of the recurrence (oracle, coin, scattering collapsed).
    pub fn step(&self) -> Self {
        let m = self.m as f64;
        StarReducedState {
            alpha_plus: ((m - 2.0) * self.alpha_minus - 2.0 * self.psi_plus) / m,
            alpha_minus: self.alpha_plus,
            psi_plus: ((2.0 * m - 2.0) * self.alpha_minus + (m - 2.0) * self.psi_plus) / m,
            psi_minus: -self.psi_minus,
            m: self.m,
            t: self.t + 1,
        }
    }

    /// `(M-1)(|alpha+|^2 + |alpha-|^2) + |psi+|^2 + |psi-|^2`.
    pub fn norm_sqr(&self) -> f64 {
        (self.m as f64 - 1.0) * (self.alpha_plus.norm_sqr() + self.alpha_minus.norm_sqr())
            + self.marked_probability()
    }

    pub fn marked_probability(&self) -> f64 {
        self.psi_plus.norm_sqr() + self.psi_minus.norm_sqr()
    }
}

/// Eigen-quantities of the star transition matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarSpectrum {
    pub m: usize,
    /// Radians; `e^{i lambda} = ((M-1) + i sqrt(2M-1)) / M`.
    pub lambda: f64,
    /// `[-1, e^{i lambda}, e^{-i lambda}]`.
    pub eigenvalues: [Complex64; 3],
    /// `pi / (2 lambda)`.
    pub t_opt: f64,
    /// Large-`M` limit of `t_opt`: `pi / (2 sqrt 2) * sqrt(M)`.
    pub t_asymptotic: f64,
    pub p_asymptotic: f64,
}

pub fn star_spectrum(m: usize) -> Result<StarSpectrum, SpectralError> {
    check_m(m)?;
    let mf = m as f64;
    let im = (2.0 * mf - 1.0).sqrt();
    let lambda = im.atan2(mf - 1.0);
    let e = Complex64::new((mf - 1.0) / mf, im / mf);
    Ok(StarSpectrum {
        m,
        lambda,
        eigenvalues: [Complex64::new(-1.0, 0.0), e, e.conj()],
        t_opt: PI / (2.0 * lambda),
        t_asymptotic: PI / (2.0 * 2f64.sqrt()) * mf.sqrt(),
        p_asymptotic: 1.0,
    })
}

/// `A` acting on `(alpha_plus, alpha_minus, psi_plus)`.
pub fn star_transition_matrix(m: usize) -> Result<[[f64; 3]; 3], SpectralError> {
    check_m(m)?;
    let mf = m as f64;
    Ok([
        [0.0, (mf - 2.0) / mf, -2.0 / mf],
        [1.0, 0.0, 0.0],
        [0.0, 2.0 * (mf - 1.0) / mf, (mf - 2.0) / mf],
    ])
}

/// Eigenvalues of `A` from a general real Schur decomposition, ordered by
/// argument descending (`-1` first, then `e^{+i lambda}`, `e^{-i lambda}`).
pub fn numeric_star_eigenvalues(m: usize) -> Result<[Complex64; 3], SpectralError> {
    let a = star_transition_matrix(m)?;
    let mat = Matrix3::from_fn(|i, j| a[i][j]);
    let mut eig: Vec<Complex64> = mat
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    eig.sort_by(|x, y| {
        let key = |z: &Complex64| {
            if z.re < 0.0 && z.im.abs() < 1e-8 {
                PI
            } else {
                z.arg()
            }
        };
        key(y).total_cmp(&key(x))
    });
    Ok([eig[0], eig[1], eig[2]])
}

/// `sin^2(lambda t)`, the large-`M` marked probability.
pub fn star_predicted_prob(m: usize, t: f64) -> Result<f64, SpectralError> {
    let s = star_spectrum(m)?;
    Ok((s.lambda * t).sin().powi(2))
}

/// Star polarity with every `+` pole at the center.
pub fn star_center_polarity(m: usize) -> Result<PolarityMap, SpectralError> {
    check_m(m)?;
    let g = star(m);
    Ok(PolarityMap::new(&g, vec![0; m]).expect("center is an endpoint of every edge"))
}

/// Runs the reduced recurrence next to the full walk on the star (marked
/// edge 0, all `+` poles at the center) and returns the largest amplitude
/// deviation over `t <= t_max`.
pub fn reduced_vs_full(m: usize, t_max: usize) -> Result<f64, SpectralError> {
    let polarity = star_center_polarity(m)?;
    reduced_vs_full_with(m, t_max, &polarity)
}

/// As [`reduced_vs_full`] with an arbitrary star polarity.
pub fn reduced_vs_full_with(
    m: usize,
    t_max: usize,
    polarity: &PolarityMap,
) -> Result<f64, SpectralError> {
    check_m(m)?;
    let g = star(m);
    let walk = Walk::search_walk(&g, polarity, [0])?;
    let mut full = WalkState::diagonal(&g);
    let mut reduced = StarReducedState::initial(m)?;
    let mut worst = deviation(&full, &reduced);
    for _ in 0..t_max {
        walk.step(&mut full)?;
        reduced = reduced.step();
        worst = worst.max(deviation(&full, &reduced));
    }
    Ok(worst)
}

fn deviation(full: &WalkState, reduced: &StarReducedState) -> f64 {
    let mut worst = (full.pair(0)[0] - reduced.psi_plus)
        .norm()
        .max((full.pair(0)[1] - reduced.psi_minus).norm());
    for [p, q] in &full.amplitudes()[1..] {
        worst = worst
            .max((p - reduced.alpha_plus).norm())
            .max((q - reduced.alpha_minus).norm());
    }
    worst
}

/// Node search on starified `K_n`: marks the virtual edge of node 0, sweeps
/// `t <= t_max` under greedy polarity and annotates the prediction `pi n / 4`.
pub fn complete_graph_report(n: usize, t_max: usize) -> Result<SweepReport, SpectralError> {
    if n < 3 {
        return Err(SpectralError::CompleteTooSmall(n));
    }
    let s = starify(&complete(n));
    let polarity = PolarityMap::greedy(&s.graph);
    let walk = Walk::search_walk(&s.graph, &polarity, [s.virtual_edge_of(0)])?;
    let mut report = walk.sweep(t_max)?;
    report.predicted_t = Some(complete_graph_predicted_t(n));
    Ok(report)
}

pub fn complete_graph_predicted_t(n: usize) -> f64 {
    PI * n as f64 / 4.0
}
