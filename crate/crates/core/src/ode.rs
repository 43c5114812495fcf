use nalgebra::DVector;

/// One classical fourth-order Runge-Kutta step of `y' = f(t, y)`.
pub(crate) fn rk4_step<F>(f: &mut F, t: f64, y: &DVector<f64>, h: f64) -> DVector<f64>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let half = 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(t + half, &(y + &k1 * half));
    let k3 = f(t + half, &(y + &k2 * half));
    let k4 = f(t + h, &(y + &k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Uniform grid `0, h, 2h, ..., N h` with `N h >= horizon` (up to rounding).
pub(crate) fn time_grid(h: f64, horizon: f64) -> Vec<f64> {
    let steps = ((horizon / h) - 1e-9).ceil().max(1.0) as usize;
    (0..=steps).map(|k| k as f64 * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk4_matches_exponential() {
        let mut f = |_t: f64, y: &DVector<f64>| -y;
        let mut y = DVector::from_vec(vec![1.0]);
        for k in 0..100 {
            y = rk4_step(&mut f, k as f64 * 0.01, &y, 0.01);
        }
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn grid_covers_horizon() {
        let g = time_grid(0.1, 1.0);
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-12);
        assert_eq!(time_grid(0.3, 1.0).len(), 5);
    }
}
