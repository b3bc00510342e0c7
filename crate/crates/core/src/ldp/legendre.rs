use serde::Serialize;

/// Numerical settings shared by the rate-function routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LdpConfig {
    /// Relative residual accepted when inverting `h₂ = h₁`.
    pub root_tol: f64,
    /// Target accuracy of returned rate values.
    pub rate_tol: f64,
    pub max_bisection: usize,
    /// At the right endpoint `x = 1/l` the supremum is approached as
    /// `λ → ∞`; it is evaluated at `λ = plateau_factor · l`.
    pub plateau_factor: f64,
    /// Largest `λ` considered when bracketing the maximizer.
    pub lambda_cap: f64,
}

impl Default for LdpConfig {
    fn default() -> Self {
        LdpConfig {
            root_tol: 1e-12,
            rate_tol: 1e-9,
            max_bisection: 200,
            plateau_factor: 60.0,
            lambda_cap: 1e4,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `sup_{λ ≥ 0} {λx - Λ(λ)}` for a convex `Λ` with `Λ(0) = 0`, by golden
/// section on `[0, λ_max]`. `λ_max` is doubled from 1 until the slope
/// `x - Λ'(λ_max)` turns negative.
pub(crate) fn legendre<F, D>(x: f64, cgf: F, slope: D, cfg: &LdpConfig) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let objective = |lam: f64| lam * x - cgf(lam);
    let mut hi = 1.0;
    while x - slope(hi) > 0.0 && hi < cfg.lambda_cap {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = objective(a);
    let mut fb = objective(b);
    // the objective is flat to second order near the maximizer, so a
    // λ-width of sqrt(rate_tol)·scale leaves an error well below rate_tol
    let width_tol = 1e-3 * cfg.rate_tol.sqrt() * hi.max(1.0);
    for _ in 0..200 {
        if hi - lo <= width_tol {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = objective(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = objective(a);
        }
    }
    [fa, fb, objective(lo), objective(hi), 0.0]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Numerically stable `ln(1 + e^w)`.
pub(crate) fn softplus(w: f64) -> f64 {
    if w > 35.0 {
        w + (-w).exp()
    } else {
        w.exp().ln_1p()
    }
}

/// `ln(1 - e^{-λ})` for `λ > 0`, accurate at both ends.
pub(crate) fn log1mexp(lambda: f64) -> f64 {
    if lambda > std::f64::consts::LN_2 {
        (-(-lambda).exp()).ln_1p()
    } else {
        (-(-lambda).exp_m1()).ln()
    }
}

/// `e^w / (1 + e^w)`.
pub(crate) fn logistic(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}
