//! Closed-form exponents: spectral-gap decay, the sampling schedule, the
//! smoothing and cutoff parameters and the resulting error exponent `κ`.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
    }
    Ok(())
}

/// `η = 1/(1+λ)`.
pub fn eta(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 / (1.0 + lambda))
}

/// The exponent balancing the two error terms over an interval of length
/// `|I|`: `(1/(λ+1))·((1/2t)·log|I| + 1)`.
pub fn lambda_prime(t: f64, interval_length: f64, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("λ must be non-negative, got {lambda}")));
    }
    if !(interval_length > 0.0 && interval_length < 1.0) {
        return Err(Error::ScheduleViolation(format!(
            "interval length must lie in (0, 1), got {interval_length}"
        )));
    }
    if !(t > 0.5 * (1.0 / interval_length).ln()) {
        return Err(Error::ScheduleViolation(format!(
            "t = {t} must exceed ½·log(1/|I|) = {}",
            0.5 * (1.0 / interval_length).ln()
        )));
    }
    Ok((interval_length.ln() / (2.0 * t) + 1.0) / (lambda + 1.0))
}

/// `C·e^{−2ληt}·S²·|I|^{2−λη}`.
pub fn l2_bound(t: f64, interval_length: f64, lambda: f64, sobolev: f64, c: f64) -> Result<f64> {
    let e = eta(lambda)?;
    if !(interval_length > 0.0) {
        return Err(Error::InvalidArgument(format!("interval length must be positive, got {interval_length}")));
    }
    if interval_length < 1.0 && !(t > 0.5 * (1.0 / interval_length).ln()) {
        return Err(Error::ScheduleViolation(format!("t = {t} too small for |I| = {interval_length}")));
    }
    Ok(c * (-2.0 * lambda * e * t).exp() * sobolev * sobolev * interval_length.powf(2.0 - lambda * e))
}

/// `t_n = (σ/λ)·log n`.
pub fn schedule_tn(n: u64, sigma: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(sigma / lambda * (n as f64).ln())
}

fn check_ledger(eta: f64, eta1: f64, alpha1: f64, beta: f64) -> Result<()> {
    if !(eta1 > 0.0 && eta1 < 2.0 * eta) {
        return Err(Error::InvalidArgument(format!("η₁ must lie in (0, 2η) = (0, {}), got {eta1}", 2.0 * eta)));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("β must be positive, got {beta}")));
    }
    if !(alpha1 > 0.0) {
        return Err(Error::InvalidArgument(format!("α₁ must be positive, got {alpha1}")));
    }
    Ok(())
}

/// `δ_n = exp(−(η − η₁/2)·λ·t_n / (3/2 + α₁/β))` together with the paired
/// cutoff `ε_n = δ_n^{1/β}`. Fails when `e^{−2t_n} > δ_n^{1/2}`.
pub fn delta_n(t_n: f64, lambda: f64, eta: f64, eta1: f64, alpha1: f64, beta: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    check_ledger(eta, eta1, alpha1, beta)?;
    if !(t_n >= 0.0) {
        return Err(Error::InvalidArgument(format!("t_n must be >= 0, got {t_n}")));
    }
    let log_delta = -(eta - eta1 / 2.0) * lambda * t_n / (1.5 + alpha1 / beta);
    if -2.0 * t_n > 0.5 * log_delta {
        return Err(Error::ScheduleViolation(format!(
            "e^(-2t) = {} exceeds δ^(1/2) = {} at t = {t_n}",
            (-2.0 * t_n).exp(),
            (0.5 * log_delta).exp()
        )));
    }
    let delta = log_delta.exp();
    Ok((delta, (log_delta / beta).exp()))
}

/// `κ = λ(η − η₁/2)/(6 + 4α₁/β)`.
pub fn kappa_step3(lambda: f64, eta: f64, eta1: f64, alpha1: f64, beta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("β must be positive, got {beta}")));
    }
    Ok(lambda * (eta - eta1 / 2.0) / (6.0 + 4.0 * alpha1 / beta))
}

/// Limit of [`kappa_step3`] as `α₁, β → 1` with `η₁ = α₁/σ`.
pub fn kappa_sigma(lambda: f64, sigma: f64) -> Result<f64> {
    Ok(lambda / 10.0 * (eta(lambda)? - 1.0 / (2.0 * sigma)))
}

/// Same limit with `η₁ = 7α₁/σ`.
pub fn kappa_sigma_uniform(lambda: f64, sigma: f64) -> Result<f64> {
    Ok(lambda / 10.0 * (eta(lambda)? - 7.0 / (2.0 * sigma)))
}

/// Root of `κ(σ) = λ/(2σ)`: `σ = 5.5(1+λ)`.
pub fn solve_sigma(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(5.5 * (1.0 + lambda))
}

/// Root of the uniform variant: `σ = 8.5(1+λ)`.
pub fn solve_sigma_uniform(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(8.5 * (1.0 + lambda))
}

/// `λ/σ` at `σ = solve_sigma(λ)`.
pub fn kappa_final(lambda: f64) -> Result<f64> {
    Ok(lambda / solve_sigma(lambda)?)
}

/// `min{κ(σ), λ/(2σ)}` at `σ = solve_sigma_uniform(λ)`.
pub fn kappa_prime(lambda: f64) -> Result<f64> {
    let sigma = solve_sigma_uniform(lambda)?;
    Ok(kappa_sigma_uniform(lambda, sigma)?.min(lambda / (2.0 * sigma)))
}

/// `⌊n^{1/7}⌋`, exact for all `n`.
pub fn scale_mn(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut m = (n as f64).powf(1.0 / 7.0).floor() as u64;
    let pow7 = |m: u64| m.checked_pow(7);
    while pow7(m + 1).is_some_and(|p| p <= n) {
        m += 1;
    }
    while pow7(m).is_none_or(|p| p > n) {
        m -= 1;
    }
    Ok(m)
}

/// `η₁ = α₁/σ`.
pub fn eta1_sector(alpha1: f64, sigma: f64) -> f64 {
    alpha1 / sigma
}

/// `η₁ = 7α₁/σ`.
pub fn eta1_uniform(alpha1: f64, sigma: f64) -> f64 {
    7.0 * alpha1 / sigma
}

/// `Σ_n e^{−λη₁t_n} = Σ_n n^{−ση₁}` with `η₁ = α₁/σ`; the exponent is `α₁`.
pub fn summable_sector(alpha1: f64) -> bool {
    alpha1 > 1.0
}

/// `Σ_m m^{6 − ση₁}` with `η₁ = 7α₁/σ`; the exponent is `7α₁ − 6`.
pub fn summable_uniform(alpha1: f64) -> bool {
    7.0 * alpha1 - 6.0 > 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Sector,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentLedger {
    pub variant: Variant,
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub eta: f64,
    pub eta1: f64,
    pub sigma: f64,
    /// `κ(σ)`, the limiting value of the three-term optimization.
    pub kappa_sigma: f64,
    /// `κ` at the given `α₁, β`.
    pub kappa_step3: f64,
    /// Exponent in the final error term.
    pub kappa: f64,
    pub summable: bool,
}

impl ExponentLedger {
    pub fn new(variant: Variant, lambda: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidArgument(format!("λ must lie in (0, 1], got {lambda}")));
        }
        if !(1.0 < alpha1 && alpha1 < alpha2 && alpha2 < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "need 1 < α₁ < α₂ < 2, got α₁ = {alpha1}, α₂ = {alpha2}"
            )));
        }
        let e = eta(lambda)?;
        let beta = alpha2 - alpha1;
        let (sigma, eta1, kappa_sigma, kappa, summable) = match variant {
            Variant::Sector => {
                let s = solve_sigma(lambda)?;
                (s, eta1_sector(alpha1, s), kappa_sigma(lambda, s)?, kappa_final(lambda)?, summable_sector(alpha1))
            }
            Variant::Uniform => {
                let s = solve_sigma_uniform(lambda)?;
                (
                    s,
                    eta1_uniform(alpha1, s),
                    kappa_sigma_uniform(lambda, s)?,
                    kappa_prime(lambda)?,
                    summable_uniform(alpha1),
                )
            }
        };
        check_ledger(e, eta1, alpha1, beta)?;
        Ok(ExponentLedger {
            variant,
            lambda,
            alpha1,
            alpha2,
            beta,
            eta: e,
            eta1,
            sigma,
            kappa_sigma,
            kappa_step3: kappa_step3(lambda, e, eta1, alpha1, beta)?,
            kappa,
            summable,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_values() {
        assert_eq!(eta(1.0).unwrap(), 0.5);
        assert!((eta(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((eta(1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(eta(0.0).is_err());
    }

    #[test]
    fn lambda_prime_balance() {
        let (t, len, lam) = (3.0, 0.2, 0.7);
        let lp = lambda_prime(t, len, lam).unwrap();
        assert!(lp > 0.0 && lp < 1.0);
        let lhs = len * (2.0 * t * (lp - 1.0)).exp();
        let rhs = len * len * (-2.0 * lam * lp * t).exp();
        assert!((lhs - rhs).abs() < 1e-12);
        assert!((lambda_prime(1e9, 0.3, 1.0).unwrap() - 0.5).abs() < 1e-9);
        let eps = 0.3;
        let t = 5.0;
        let lp0 = lambda_prime(t, (-2.0 * t * eps).exp(), 0.0).unwrap();
        assert!((lp0 - (1.0 - eps)).abs() < 1e-12);
        assert!(matches!(lambda_prime(0.1, 0.2, 1.0), Err(Error::ScheduleViolation(_))));
    }

    #[test]
    fn l2_bound_values() {
        assert!((l2_bound(1.0, 1.0, 1.0, 1.0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        let a = l2_bound(2.0, 0.5, 1.0, 2.0, 3.0).unwrap();
        let b = l2_bound(4.0, 0.5, 1.0, 2.0, 3.0).unwrap();
        assert!((b / a - (-2.0f64 * 0.5 * 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn schedule_and_delta() {
        assert_eq!(schedule_tn(1, 11.0, 1.0).unwrap(), 0.0);
        assert!((schedule_tn(3, 11.0, 1.0).unwrap() - 11.0 * 3f64.ln()).abs() < 1e-12);
        assert_eq!(delta_n(0.0, 1.0, 0.5, 0.1, 1.0, 1.0).unwrap().0, 1.0);
        let n: f64 = 7.0;
        let t = 11.0 * n.ln();
        let (d, e) = delta_n(t, 1.0, 0.5, 1.0 / 11.0, 1.0, 1.0).unwrap();
        assert!((d - n.powf(-2.0)).abs() < 1e-14);
        assert!((e - d).abs() < 1e-15);
    }

    #[test]
    fn three_term_balance() {
        let (lam, et, eta1, a1, b) = (0.8, eta(0.8).unwrap(), 0.1, 1.3, 0.4);
        let t = 6.0;
        let (d, e) = delta_n(t, lam, et, eta1, a1, b).unwrap();
        let first = d.sqrt();
        let second = e.powf(b) / d.sqrt();
        let third = (-(et - eta1 / 2.0) * lam * t).exp() * e.powf(-a1) / d;
        assert!((first - second).abs() < 1e-12 * first);
        assert!((first - third).abs() < 1e-12 * first);
    }

    #[test]
    fn schedule_violation_detected() {
        // δ has to decay slower than e^{-4t}
        assert!(delta_n(1.0, 1.0, 0.5, 0.1, 1.5, 0.2).is_ok());
        assert!(matches!(
            delta_n(1.0, 1000.0, 0.999, 0.001, 1.0, 100.0),
            Err(Error::ScheduleViolation(_))
        ));
    }

    #[test]
    fn sigma_solutions() {
        assert_eq!(solve_sigma(1.0).unwrap(), 11.0);
        assert_eq!(solve_sigma_uniform(1.0).unwrap(), 17.0);
        assert!((kappa_final(1.0).unwrap() - 1.0 / 11.0).abs() < 1e-15);
        assert!((kappa_sigma(1.0, 11.0).unwrap() - 1.0 / 22.0).abs() < 1e-15);
        for i in 1..=10 {
            let lam = i as f64 / 10.0;
            let s = solve_sigma(lam).unwrap();
            assert!((kappa_sigma(lam, s).unwrap() - lam / (2.0 * s)).abs() < 1e-12);
            let s = solve_sigma_uniform(lam).unwrap();
            assert!((kappa_sigma_uniform(lam, s).unwrap() - lam / (2.0 * s)).abs() < 1e-12);
        }
    }

    #[test]
    fn step3_limit() {
        let s = 11.0;
        let k = kappa_step3(1.0, 0.5, 1.0 / s, 1.0, 1.0).unwrap();
        assert!((k - kappa_sigma(1.0, s).unwrap()).abs() < 1e-15);
        assert_eq!(kappa_step3(1.0, 0.5, 1.0, 1.2, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn scale_values() {
        assert_eq!(scale_mn(1).unwrap(), 1);
        assert_eq!(scale_mn(127).unwrap(), 1);
        assert_eq!(scale_mn(128).unwrap(), 2);
        assert_eq!(scale_mn(2186).unwrap(), 2);
        assert_eq!(scale_mn(2187).unwrap(), 3);
        assert_eq!(scale_mn(u64::MAX).unwrap(), 565);
    }

    #[test]
    fn summability() {
        for a in [0.5, 1.0, 1.0 + 1e-15, 1.2, 1.99] {
            assert_eq!(summable_sector(a), a > 1.0);
            assert_eq!(summable_uniform(a), a > 1.0);
        }
    }

    #[test]
    fn ledger_at_one() {
        let l = ExponentLedger::new(Variant::Sector, 1.0, 1.01, 1.99).unwrap();
        assert_eq!(l.sigma, 11.0);
        assert!((l.kappa - 1.0 / 11.0).abs() < 1e-15);
        assert!(l.summable);
        let u = ExponentLedger::new(Variant::Uniform, 1.0, 1.01, 1.99).unwrap();
        assert_eq!(u.sigma, 17.0);
        assert!(ExponentLedger::new(Variant::Sector, 1.0, 1.5, 1.2).is_err());
    }
}
