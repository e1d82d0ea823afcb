//! Gamma function and the Bloch–Wigner dilogarithm.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Rational;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument z - 1
    let mut a = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    a
}

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
    }
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
    }
}

pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

const BERNOULLI_TERMS: usize = 40;

/// `B_k / (k+1)!` for the series `Li2(w) = sum_k B_k u^{k+1}/(k+1)!`, `u = -log(1-w)`.
fn series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut b: Vec<Rational> = Vec::with_capacity(BERNOULLI_TERMS);
        b.push(Rational::one());
        for m in 1..BERNOULLI_TERMS {
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                // binom = C(m+1, k)
                acc += Rational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        let mut factorial = BigInt::one();
        b.iter()
            .enumerate()
            .map(|(k, bk)| {
                factorial *= BigInt::from(k + 1);
                (bk / Rational::from_integer(factorial.clone())).to_f64().unwrap_or(0.0)
            })
            .collect()
    })
}

/// `Li2(w)` for `|w| <= 1`, `Re w <= 1/2`.
fn li2_reduced(w: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - w).ln();
    let mut power = u;
    let mut sum = Complex64::new(0.0, 0.0);
    for c in series_coefficients() {
        sum += power * *c;
        power *= u;
    }
    sum
}

fn bloch_wigner_reduced(w: Complex64) -> f64 {
    if w.norm() == 0.0 {
        return 0.0;
    }
    li2_reduced(w).im + (Complex64::new(1.0, 0.0) - w).arg() * w.norm().ln()
}

/// `D(z) = Im Li2(z) + arg(1-z) log|z|`, single-valued, zero on the real line.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 || !z.is_finite() {
        return 0.0;
    }
    let one = Complex64::new(1.0, 0.0);
    // the six images of z under the anharmonic group with their signs
    let images = [
        (z, 1.0),
        (one - z, -1.0),
        (one / z, -1.0),
        (one / (one - z), 1.0),
        (one - one / z, 1.0),
        (z / (z - one), -1.0),
    ];
    let (w, sign) = images
        .into_iter()
        .filter(|(w, _)| w.norm() <= 1.0 && w.re <= 0.5)
        .min_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
        .expect("one image lies in the reduced region");
    sign * bloch_wigner_reduced(w)
}
