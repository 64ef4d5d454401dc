//! Time quadratures over diagnostic samples.

/// Composite trapezoid rule; zero for fewer than two samples.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Running trapezoid integrals, one per sample (starting at zero).
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for i in 0..times.len() {
        if i > 0 {
            acc += 0.5 * (times[i] - times[i - 1]) * (values[i - 1] + values[i]);
        }
        out.push(acc);
    }
    out
}

fn simpson_panel(t: &[f64], f: &[f64]) -> f64 {
    let h0 = t[1] - t[0];
    let h1 = t[2] - t[1];
    let s = h0 + h1;
    s / 6.0
        * ((2.0 - h1 / h0) * f[0] + s * s / (h0 * h1) * f[1] + (2.0 - h0 / h1) * f[2])
}

/// Integral over `[t1, t2]` of the parabola through three samples.
fn parabola_tail(t: &[f64], f: &[f64]) -> f64 {
    let h0 = t[1] - t[0];
    let h1 = t[2] - t[1];
    -h1.powi(3) / (6.0 * h0 * (h0 + h1)) * f[0]
        + h1 * (3.0 * h0 + h1) / (6.0 * h0) * f[1]
        + h1 * (3.0 * h0 + 2.0 * h1) / (6.0 * (h0 + h1)) * f[2]
}

/// Composite Simpson rule on possibly non-uniform samples. An odd trailing
/// interval is closed with the parabola through the last three samples;
/// two samples fall back to the trapezoid.
pub fn simpson(times: &[f64], values: &[f64]) -> f64 {
    cumulative_simpson(times, values).last().copied().unwrap_or(0.0)
}

/// Prefix integrals of [`simpson`], one per sample.
pub fn cumulative_simpson(times: &[f64], values: &[f64]) -> Vec<f64> {
    let m = times.len();
    let mut out = Vec::with_capacity(m);
    let mut paired = 0.0;
    for i in 0..m {
        let value = match i {
            0 => 0.0,
            1 => 0.5 * (times[1] - times[0]) * (values[0] + values[1]),
            _ if i % 2 == 0 => {
                paired += simpson_panel(&times[i - 2..=i], &values[i - 2..=i]);
                paired
            }
            _ => paired + parabola_tail(&times[i - 2..=i], &values[i - 2..=i]),
        };
        out.push(value);
    }
    out
}
