//! Trapped-ion QCCD cost and runtime model.
//!
//! Wall-clock runtime on a QCCD machine is dominated by ion transport and
//! the recooling it forces, both driven by the two-qubit gate count. The
//! model here: total runtime scales linearly in two-qubit gates
//! ([`runtime_from_gates`]), splits into a transport part `T` and a cooling
//! part `coolA * T^coolB` ([`solve_transport`] inverts that split), and a
//! SWAP-free compilation wins back transport proportional to the SWAPs it
//! removed ([`lpc_transport`]). Credit-style pricing is a separate linear
//! form in gate and SPAM counts ([`hqc`]).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::ResourceReport;

#[derive(Debug, Error)]
pub enum CostError {
    #[error("power-law fit needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("power-law fit needs positive coordinates, got ({0}, {1})")]
    NonPositivePoint(f64, f64),
}

/// Model constants. `shots` and `spam` feed the credit formula; the rest
/// shape the runtime model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct CostParams {
    pub shots: u64,
    pub spam: u64,
    pub tau_hqc_seconds: f64,
    pub alpha_swap_seconds: f64,
    pub cool_a: f64,
    pub cool_b: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            shots: 1000,
            spam: 0,
            tau_hqc_seconds: 5.0,
            alpha_swap_seconds: 1e-3,
            cool_a: 0.6,
            cool_b: 0.9,
        }
    }
}

/// Credit price of a circuit run: `5 + shots * (n1q + 10 n2q + 5 spam) / 5000`.
pub fn hqc(n_2q: usize, n_1q: usize, shots: u64, spam: u64) -> f64 {
    let per_shot = n_1q as f64 + 10.0 * n_2q as f64 + 5.0 * spam as f64;
    5.0 + shots as f64 * per_shot / 5000.0
}

/// Total runtime of a circuit: `0.002 * n2q * tauHqcSeconds`.
pub fn runtime_from_gates(n_2q: usize, params: &CostParams) -> f64 {
    0.002 * n_2q as f64 * params.tau_hqc_seconds
}

/// Cooling overhead caused by `transport_s` seconds of transport:
/// `coolA * T^coolB`.
pub fn cooling_time(transport_s: f64, params: &CostParams) -> f64 {
    params.cool_a * transport_s.powf(params.cool_b)
}

/// A transport time and how well it satisfies the runtime split.
#[derive(Debug, Clone, Copy)]
pub struct TransportSolve {
    pub seconds: f64,
    pub residual: f64,
}

/// Splits the total runtime of `n_2q` gates into transport plus cooling:
/// bisection on `T + coolA * T^coolB = runtime_from_gates(n_2q)`. The left
/// side is strictly increasing in `T`, so the root in `[0, runtime]` is
/// unique.
pub fn solve_transport(n_2q: usize, params: &CostParams) -> TransportSolve {
    let runtime = runtime_from_gates(n_2q, params);
    if runtime <= 0.0 {
        return TransportSolve {
            seconds: 0.0,
            residual: 0.0,
        };
    }
    let excess = |t: f64| t + cooling_time(t, params) - runtime;
    let (mut lo, mut hi) = (0.0f64, runtime);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let seconds = 0.5 * (lo + hi);
    TransportSolve {
        seconds,
        residual: excess(seconds).abs(),
    }
}

/// Transport left after a SWAP-free recompilation removed `n_swap` SWAPs:
/// `max(0, T - alphaSwapSeconds * n_swap)`, warning when the subtraction
/// would have gone negative.
pub fn lpc_transport(transport_s: f64, n_swap: usize, params: &CostParams) -> f64 {
    let reduced = transport_s - params.alpha_swap_seconds * n_swap as f64;
    if reduced < 0.0 {
        eprintln!(
            "warning: swap credit {:.6}s exceeds transport {:.6}s, clamping to zero",
            params.alpha_swap_seconds * n_swap as f64,
            transport_s
        );
        0.0
    } else {
        reduced
    }
}

/// Side-by-side runtime and price estimate for a standard compilation and
/// its LPC counterpart.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CostEstimate {
    pub t_run_standard_s: f64,
    pub t_transport_s: f64,
    pub t_cooling_s: f64,
    pub t_run_lpc_s: f64,
    pub hqc_standard: f64,
    pub hqc_lpc: f64,
}

/// Runs the model end to end. The transport split is computed from the
/// standard compilation, and the LPC runtime rebuilds the same split after
/// subtracting the transport credit for the SWAPs the standard compilation
/// needed and LPC removed.
pub fn estimate(
    standard: &ResourceReport,
    lpc: &ResourceReport,
    params: &CostParams,
) -> CostEstimate {
    let solve = solve_transport(standard.n_2q, params);
    let lpc_t = lpc_transport(solve.seconds, standard.n_swap, params);
    CostEstimate {
        t_run_standard_s: runtime_from_gates(standard.n_2q, params),
        t_transport_s: solve.seconds,
        t_cooling_s: cooling_time(solve.seconds, params),
        t_run_lpc_s: lpc_t + cooling_time(lpc_t, params),
        hqc_standard: hqc(standard.n_2q, standard.n_1q, params.shots, params.spam),
        hqc_lpc: hqc(lpc.n_2q, lpc.n_1q, params.shots, params.spam),
    }
}

/// A fitted power law `y = a * x^b` with standard errors from the
/// log-space residuals.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub b_stderr: f64,
}

/// Ordinary least squares on `ln y = ln a + b ln x`.
///
/// Rejects fewer than two points and any nonpositive coordinate. Standard
/// errors use the usual unbiased residual variance; with exactly two
/// points the fit is exact and the errors are zero.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, CostError> {
    let m = points.len();
    if m < 2 {
        return Err(CostError::TooFewPoints(m));
    }
    for &(x, y) in points {
        if x <= 0.0 || y <= 0.0 {
            return Err(CostError::NonPositivePoint(x, y));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let u_mean = logs.iter().map(|(u, _)| u).sum::<f64>() / m as f64;
    let v_mean = logs.iter().map(|(_, v)| v).sum::<f64>() / m as f64;
    let suu: f64 = logs.iter().map(|(u, _)| (u - u_mean).powi(2)).sum();
    let suv: f64 = logs
        .iter()
        .map(|(u, v)| (u - u_mean) * (v - v_mean))
        .sum();
    let b = suv / suu;
    let ln_a = v_mean - b * u_mean;
    let a = ln_a.exp();

    let (a_stderr, b_stderr) = if m == 2 {
        (0.0, 0.0)
    } else {
        let sse: f64 = logs
            .iter()
            .map(|(u, v)| (v - ln_a - b * u).powi(2))
            .sum();
        let variance = sse / (m - 2) as f64;
        let b_se = (variance / suu).sqrt();
        let ln_a_se = (variance * (1.0 / m as f64 + u_mean * u_mean / suu)).sqrt();
        (a * ln_a_se, b_se)
    };
    Ok(PowerLawFit {
        a,
        b,
        a_stderr,
        b_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn frozen_model_values() {
        let params = CostParams::default();
        assert_abs_diff_eq!(hqc(1, 0, 1000, 0), 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(runtime_from_gates(1000, &params), 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cooling_time(1.0, &params), 0.6, epsilon = 1e-12);
        let solve = solve_transport(160, &params);
        assert_abs_diff_eq!(solve.seconds, 1.0, epsilon = 1e-9);
        assert!(solve.residual < 1e-9);
        assert_abs_diff_eq!(lpc_transport(1.0, 200, &params), 0.8, epsilon = 1e-12);
    }

    #[test]
    fn transport_split_stays_tight_at_scale() {
        let params = CostParams::default();
        for n_2q in [0usize, 1, 10, 1_000, 100_000, 1_000_000] {
            let solve = solve_transport(n_2q, &params);
            assert!(solve.residual < 1e-9, "n_2q={n_2q}: {}", solve.residual);
        }
    }

    #[test]
    fn clamped_transport_is_zero() {
        let params = CostParams::default();
        assert_eq!(lpc_transport(0.1, 200, &params), 0.0);
    }

    #[test]
    fn power_law_fit_recovers_exact_data() {
        let points: Vec<(f64, f64)> = (1..=20)
            .map(|i| {
                let x = 0.37 * i as f64;
                (x, 0.6 * x.powf(0.9))
            })
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert_abs_diff_eq!(fit.a, 0.6, epsilon = 1e-6);
        assert_abs_diff_eq!(fit.b, 0.9, epsilon = 1e-6);
        assert!(fit.a_stderr < 1e-6 && fit.b_stderr < 1e-6);
    }

    #[test]
    fn power_law_fit_tolerates_noise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let points: Vec<(f64, f64)> = (1..=200)
            .map(|i| {
                let x = 0.5 * i as f64;
                let noise = 1.0 + rng.gen_range(-0.05..=0.05);
                (x, 0.6 * x.powf(0.9) * noise)
            })
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!((fit.a - 0.6).abs() < 0.1, "a = {}", fit.a);
        assert!((fit.b - 0.9).abs() < 0.1, "b = {}", fit.b);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(matches!(
            fit_power_law(&[(1.0, 2.0)]),
            Err(CostError::TooFewPoints(1))
        ));
        assert!(matches!(
            fit_power_law(&[(1.0, 2.0), (0.0, 3.0)]),
            Err(CostError::NonPositivePoint(..))
        ));
    }

    #[test]
    fn params_json_uses_camel_case_and_defaults() {
        let params: CostParams = serde_json::from_str(r#"{"shots":500}"#).unwrap();
        assert_eq!(params.shots, 500);
        assert_abs_diff_eq!(params.tau_hqc_seconds, 5.0);
        let text = serde_json::to_string(&params).unwrap();
        assert!(text.contains("tauHqcSeconds"));
        assert!(text.contains("alphaSwapSeconds"));
    }
}
