use std::f64::consts::PI;

use num_complex::Complex64;

// B_{2m} / (2m (2m-1)) for m = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// ln Γ(z) for Re z > 0, with the imaginary part on the branch continuous from
/// the real axis (so that Im ln Γ(1+iy) is the continuous argument).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// γ_κ = arg Γ(1 + iκ), continuous in κ with γ_0 = 0.
pub fn gamma_phase(kappa: f64) -> f64 {
    ln_gamma(Complex64::new(1.0, kappa)).im
}

/// |Γ(1+iκ)|.
pub fn gamma_modulus(kappa: f64) -> f64 {
    ln_gamma(Complex64::new(1.0, kappa)).re.exp()
}

/// Relative defect of |Γ(1+iκ)| against (πκ / sinh πκ)^{1/2}.
pub fn gamma_modulus_defect(kappa: f64) -> f64 {
    let exact_ln = 0.5 * (PI * kappa).ln() - 0.5 * ln_sinh(PI * kappa);
    let ln_mod = ln_gamma(Complex64::new(1.0, kappa)).re;
    (ln_mod - exact_ln).exp_m1().abs()
}

fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(2.0 * x)).exp().ln_1p()
    } else {
        x.sinh().ln()
    }
}
