//! Interpolation helpers for uniformly gridded complex series.

use num_complex::Complex64;

/// Tolerance, in units of one grid step, below which a query time is snapped
/// onto the nearest node. Stage times accumulate at most a few ulps of drift
/// relative to the grid, which is far below this.
pub(crate) const NODE_SNAP: f64 = 1e-7;

/// Grid position of a query time relative to a uniform grid with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum GridPos {
    Before,
    /// Exactly on node `i` (within the snap tolerance).
    Node(usize),
    /// Inside interval `[i, i + 1]` at local coordinate `theta` in (0, 1).
    Interval(usize, f64),
    After,
}

pub(crate) fn locate(t0: f64, dt: f64, n: usize, t: f64) -> GridPos {
    let s = (t - t0) / dt;
    let nearest = s.round();
    if (s - nearest).abs() <= NODE_SNAP {
        let i = nearest as i64;
        if i < 0 {
            return GridPos::Before;
        }
        if (i as usize) < n {
            return GridPos::Node(i as usize);
        }
        return GridPos::After;
    }
    if s < 0.0 {
        return GridPos::Before;
    }
    let i = s.floor() as usize;
    if i + 1 >= n {
        return GridPos::After;
    }
    GridPos::Interval(i, s - i as f64)
}

/// Cubic Hermite interpolation on one grid interval of width `h`, given the
/// endpoint values and derivatives and the local coordinate `theta` in [0, 1].
pub(crate) fn hermite(
    y0: Complex64,
    y1: Complex64,
    d0: Complex64,
    d1: Complex64,
    h: f64,
    theta: f64,
) -> Complex64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
}

/// Sample a uniformly gridded series at time `t` with a four-point cubic
/// Lagrange stencil, clamped near the grid edges. Queries before the grid
/// return zero (the series is treated as switched on at `t0`); queries past
/// the end clamp to the final value.
pub(crate) fn sample_uniform_cubic(values: &[Complex64], t0: f64, dt: f64, t: f64) -> Complex64 {
    let n = values.len();
    if n == 0 {
        return Complex64::default();
    }
    match locate(t0, dt, n, t) {
        GridPos::Before => Complex64::default(),
        GridPos::After => values[n - 1],
        GridPos::Node(i) => values[i],
        GridPos::Interval(i, theta) => {
            if n < 4 {
                // degenerate short series: fall back to linear
                let a = values[i];
                let b = values[i + 1];
                return a + (b - a) * theta;
            }
            // stencil start, so the target interval is [start+1, start+2]
            // except at the grid edges
            let start = i.saturating_sub(1).min(n - 4);
            let x = (i - start) as f64 + theta;
            let w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
            let w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
            let w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
            let w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
            values[start] * w0 + values[start + 1] * w1 + values[start + 2] * w2
                + values[start + 3] * w3
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, -0.5 * re)
    }

    #[test]
    fn locate_snaps_to_nodes() {
        assert_eq!(locate(0.0, 0.1, 11, 0.3 + 1e-12), GridPos::Node(3));
        assert_eq!(locate(0.0, 0.1, 11, -1e-12), GridPos::Node(0));
        assert_eq!(locate(0.0, 0.1, 11, -0.05), GridPos::Before);
        assert_eq!(locate(0.0, 0.1, 11, 1.05), GridPos::After);
        match locate(0.0, 0.1, 11, 0.34) {
            GridPos::Interval(3, theta) => assert_abs_diff_eq!(theta, 0.4, epsilon = 1e-9),
            other => panic!("unexpected position {other:?}"),
        }
    }

    #[test]
    fn cubic_reproduces_cubic_polynomials() {
        // p(t) = 1 + 2t - t^2 + 0.5 t^3 sampled on a uniform grid
        let p = |t: f64| 1.0 + 2.0 * t - t * t + 0.5 * t * t * t;
        let dt = 0.2;
        let values: Vec<Complex64> = (0..20).map(|i| c(p(i as f64 * dt))).collect();
        for &t in &[0.01, 0.37, 1.9, 3.55] {
            let got = sample_uniform_cubic(&values, 0.0, dt, t);
            assert_abs_diff_eq!(got.re, c(p(t)).re, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, c(p(t)).im, epsilon = 1e-12);
        }
    }

    #[test]
    fn hermite_matches_endpoints() {
        let y0 = c(1.0);
        let y1 = c(2.0);
        let d0 = c(0.3);
        let d1 = c(-0.2);
        assert_eq!(hermite(y0, y1, d0, d1, 0.1, 0.0), y0);
        let end = hermite(y0, y1, d0, d1, 0.1, 1.0);
        assert_abs_diff_eq!(end.re, y1.re, epsilon = 1e-15);
        assert_abs_diff_eq!(end.im, y1.im, epsilon = 1e-15);
    }

    #[test]
    fn sample_before_grid_is_zero() {
        let values = vec![c(1.0); 8];
        assert_eq!(sample_uniform_cubic(&values, 0.0, 0.1, -0.5), Complex64::default());
    }
}
