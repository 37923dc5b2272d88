//! Hurwitz zeta via Euler–Maclaurin summation.
//!
//! `zeta(s, a) = sum_{k>=0} (a + k)^-s` for `s > 1`, `a > 0`. This is the
//! normalizer of the discrete power law and shows up in every power-law
//! likelihood evaluation, so it has to be cheap: the implementation sums the
//! first few terms directly and closes the tail with the Euler–Maclaurin
//! correction series, giving ~1e-14 relative accuracy for the parameter
//! ranges used here (1 < s <= 50).

/// `B_{2j} / (2j)!` for j = 1..=6.
const EM_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -5.284_190_138_687_493e-13, // B12/12! = -691/(2730 * 12!)
];

/// Hurwitz zeta `sum_{k>=0} (a+k)^-s`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0, "hurwitz_zeta requires s > 1, got {s}");
    assert!(a > 0.0, "hurwitz_zeta requires a > 0, got {a}");

    // Direct terms until the argument is large enough for the asymptotic
    // tail to converge quickly.
    let shift = if a >= 16.0 {
        0
    } else {
        (16.0 - a).ceil() as usize
    };
    let mut sum = 0.0;
    for k in 0..shift {
        sum += (a + k as f64).powf(-s);
    }

    let b = a + shift as f64;
    let b_pow = b.powf(-s); // b^-s
    sum += b * b_pow / (s - 1.0) + 0.5 * b_pow;

    // Correction terms: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * b^{-s-2j+1}.
    let inv_b2 = 1.0 / (b * b);
    let mut rising = s; // s(s+1)...(s+2j-2), starts at j=1 with just s
    let mut power = b_pow / b; // b^{-s-1}
    for (j, c) in EM_COEFFS.iter().enumerate() {
        sum += c * rising * power;
        if j + 1 < EM_COEFFS.len() {
            let k = (2 * (j + 1)) as f64;
            rising *= (s + k - 1.0) * (s + k);
            power *= inv_b2;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 30-digit arbitrary precision arithmetic.
    const CASES: &[(f64, f64, f64)] = &[
        (2.0, 1.0, 1.644_934_066_848_226_4),
        (2.5, 1.0, 1.341_487_257_250_917_2),
        (1.5, 1.0, 2.612_375_348_685_488_3),
        (2.5, 10.0, 0.022_728_699_194_534_54),
        (1.2, 3.7, 3.958_437_254_351_777_6),
        (8.0, 2.0, 0.004_077_356_197_944_339_4),
        (3.0, 0.5, 8.414_398_322_117_16),
        (1.05, 1.0, 20.580_844_302_036_985),
        (6.0, 56.0, 3.796_548_009_324_514_3e-10),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(s, a, want) in CASES {
            let got = hurwitz_zeta(s, a);
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-13, "zeta({s},{a}) = {got}, want {want}, rel {rel}");
        }
    }

    #[test]
    fn recurrence_zeta_shift() {
        // zeta(s, a) = a^-s + zeta(s, a+1)
        for &(s, a) in &[(2.5, 1.0), (1.7, 3.0), (4.0, 0.5)] {
            let lhs = hurwitz_zeta(s, a);
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0);
            assert!((lhs - rhs).abs() / lhs < 1e-14);
        }
    }
}
