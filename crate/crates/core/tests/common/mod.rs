#![allow(dead_code)]

/// One-sided slope of `f` at `x` (`dir = +1` right, `-1` left). The forward
/// quotient is Richardson-extrapolated in powers of `sqrt(h)`, which removes
/// the `h^{1/2}`, `h`, `h^{3/2}` error terms a square-root edge produces.
pub fn one_sided_slope(f: impl Fn(f64) -> f64, x: f64, dir: f64) -> f64 {
    let f0 = f(x);
    let quotient = |h: f64| (f(x + dir * h) - f0) / (dir * h);
    let mut row: Vec<f64> = (0..4).map(|i| quotient(1e-3 / 4f64.powi(i))).collect();
    for level in 1..4 {
        let r = 4f64.powf(0.5 * level as f64);
        row = row
            .windows(2)
            .map(|w| (r * w[1] - w[0]) / (r - 1.0))
            .collect();
    }
    row[0]
}

/// Plain one-sided value limit: `f` a step `h` away from `x`.
pub fn one_sided_value(f: impl Fn(f64) -> f64, x: f64, dir: f64, h: f64) -> f64 {
    f(x + dir * h)
}
