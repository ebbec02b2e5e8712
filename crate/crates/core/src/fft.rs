//! Thin layer over `rustfft`: a process-wide plan cache, zero-padded
//! transforms and the zero-centered shift used on the velocity and angle
//! axes.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

type PlanKey = (usize, bool);

fn plans() -> &'static RwLock<HashMap<PlanKey, Arc<dyn Fft<f64>>>> {
    static PLANS: OnceLock<RwLock<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    PLANS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached plan for an `n`-point transform. Safe to call from any thread.
pub fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    if let Some(p) = plans().read().expect("fft plan cache poisoned").get(&(n, forward)) {
        return Arc::clone(p);
    }
    let mut cache = plans().write().expect("fft plan cache poisoned");
    Arc::clone(cache.entry((n, forward)).or_insert_with(|| {
        let direction = if forward {
            FftDirection::Forward
        } else {
            FftDirection::Inverse
        };
        FftPlanner::new().plan_fft(n, direction)
    }))
}

/// Taper applied before a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann if n <= 1 => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
                .collect(),
        }
    }
}

/// Forward transform of `input` windowed by `taper` and zero-padded (or
/// truncated) to `n` points, written into `out`.
pub fn forward_padded(input: &[Complex64], taper: &[f64], out: &mut [Complex64]) {
    let n = out.len();
    out.fill(Complex64::new(0.0, 0.0));
    for ((o, &x), &w) in out.iter_mut().zip(input).zip(taper) {
        *o = x * w;
    }
    plan(n, true).process(out);
}

/// Unnormalized inverse transform in place.
pub fn inverse_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Reorders an FFT output so that zero frequency sits at index `n / 2`.
pub fn fftshift<T: Copy>(buf: &mut [T]) {
    let n = buf.len();
    buf.rotate_right(n / 2);
}

/// Undoes [`fftshift`].
pub fn ifftshift<T: Copy>(buf: &mut [T]) {
    let n = buf.len();
    buf.rotate_left(n / 2);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_centers_dc() {
        let mut v: Vec<i32> = (0..8).collect();
        fftshift(&mut v);
        assert_eq!(v, vec![4, 5, 6, 7, 0, 1, 2, 3]);
        assert_eq!(v[4], 0);
        ifftshift(&mut v);
        assert_eq!(v, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn hann_is_symmetric_and_zero_at_ends() {
        let w = Window::Hann.coefficients(9);
        assert!(w[0].abs() < 1e-15 && w[8].abs() < 1e-15);
        assert!((w[4] - 1.0).abs() < 1e-15);
        for i in 0..9 {
            assert!((w[i] - w[8 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn plans_are_shared() {
        let a = plan(64, true);
        let b = plan(64, true);
        assert!(Arc::ptr_eq(&a, &b));
        let handles: Vec<_> = (0..4).map(|_| std::thread::spawn(|| plan(96, false).len())).collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 96);
        }
    }

    #[test]
    fn inverse_undoes_forward_up_to_scale() {
        let x: Vec<Complex64> = (0..16).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut y = vec![Complex64::new(0.0, 0.0); 16];
        forward_padded(&x, &[1.0; 16], &mut y);
        inverse_in_place(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b / 16.0).norm() < 1e-12);
        }
    }
}
