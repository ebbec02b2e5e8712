//! Polar (range bin, angle bin) <-> uniform Cartesian resampling with
//! bilinear interpolation.

use std::ops::{Add, Mul};

use ndarray::Array2;

use crate::radar::RadarConfig;

/// `x = r sin(theta)`, `y = r cos(theta)`.
pub fn polar_point_to_cartesian(range: f64, azimuth: f64) -> (f64, f64) {
    (range * azimuth.sin(), range * azimuth.cos())
}

pub fn cartesian_point_to_polar(x: f64, y: f64) -> (f64, f64) {
    (x.hypot(y), x.atan2(y))
}

/// Uniform Cartesian sampling grid, cell centers at `min + (i + 0.5) * step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl CartesianGrid {
    /// Covers the whole field of view: `x in [-R_max, R_max]`, `y in [0, R_max]`.
    pub fn field_of_view(cfg: &RadarConfig, nx: usize, ny: usize) -> Self {
        let r = cfg.max_range();
        Self {
            x_min: -r,
            x_max: r,
            nx,
            y_min: 0.0,
            y_max: r,
            ny,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    /// Center of cell `(iy, ix)`.
    pub fn center(&self, iy: usize, ix: usize) -> (f64, f64) {
        (
            self.x_min + (ix as f64 + 0.5) * self.dx(),
            self.y_min + (iy as f64 + 0.5) * self.dy(),
        )
    }

    /// Fractional `(row, column)` coordinate of a point.
    pub fn coord(&self, x: f64, y: f64) -> (f64, f64) {
        ((y - self.y_min) / self.dy() - 0.5, (x - self.x_min) / self.dx() - 0.5)
    }
}

/// Bilinear sample of `grid` at fractional `(row, col)`; zero outside.
fn bilinear<T>(grid: &Array2<T>, row: f64, col: f64) -> T
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let (rows, cols) = grid.dim();
    if !(row >= 0.0 && col >= 0.0 && row <= (rows - 1) as f64 && col <= (cols - 1) as f64) {
        return T::default();
    }
    let r0 = (row.floor() as usize).min(rows.saturating_sub(2));
    let c0 = (col.floor() as usize).min(cols.saturating_sub(2));
    let (fr, fc) = (row - r0 as f64, col - c0 as f64);
    let r1 = (r0 + 1).min(rows - 1);
    let c1 = (c0 + 1).min(cols - 1);
    grid[[r0, c0]] * ((1.0 - fr) * (1.0 - fc))
        + grid[[r0, c1]] * ((1.0 - fr) * fc)
        + grid[[r1, c0]] * (fr * (1.0 - fc))
        + grid[[r1, c1]] * (fr * fc)
}

/// Resamples a `[range bin, angle index]` map onto `grid` (`[y, x]`).
pub fn polar_to_cartesian<T>(cfg: &RadarConfig, ra: &Array2<T>, grid: &CartesianGrid) -> Array2<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let half = (cfg.fft_points.angle / 2) as f64;
    let angle_scale = cfg.fft_points.angle as f64 * cfg.spacing() / cfg.wavelength();
    Array2::from_shape_fn((grid.ny, grid.nx), |(iy, ix)| {
        let (x, y) = grid.center(iy, ix);
        let r = x.hypot(y);
        if r == 0.0 {
            return T::default();
        }
        let range_coord = r / cfg.range_bin_width();
        let angle_coord = half + angle_scale * (x / r);
        bilinear(ra, range_coord, angle_coord)
    })
}

/// Inverse resampling from `grid` back onto the `[range bin, angle index]` lattice.
pub fn cartesian_to_polar<T>(cfg: &RadarConfig, xy: &Array2<T>, grid: &CartesianGrid) -> Array2<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let (mr, ma) = (cfg.fft_points.range, cfg.fft_points.angle);
    Array2::from_shape_fn((mr, ma), |(m, a)| {
        let s = cfg.sin_of_angle_index(a);
        if s.abs() > 1.0 {
            return T::default();
        }
        let r = cfg.range_of_bin(m as f64);
        let (x, y) = (r * s, r * (1.0 - s * s).sqrt());
        let (row, col) = grid.coord(x, y);
        bilinear(xy, row, col)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argmax(a: &Array2<f64>) -> (usize, usize) {
        a.indexed_iter().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0
    }

    #[test]
    fn hand_trig() {
        let (x, y) = polar_point_to_cartesian(10.0, 30f64.to_radians());
        assert!((x - 5.0).abs() < 1e-12);
        assert!((y - 8.660_254_037_844_386).abs() < 1e-12);
        let (r, th) = cartesian_point_to_polar(x, y);
        assert!((r - 10.0).abs() < 1e-12 && (th - 30f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn boresight_maps_to_center_column() {
        let cfg = RadarConfig::awr1843();
        let mut ra = Array2::<f64>::zeros((128, 128));
        for m in 0..128 {
            ra[[m, 64]] = 1.0;
        }
        let grid = CartesianGrid::field_of_view(&cfg, 129, 128);
        let xy = polar_to_cartesian(&cfg, &ra, &grid);
        for iy in 5..120 {
            let row = xy.row(iy);
            let best = row.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            assert_eq!(best, 64, "row {iy}");
            let (x, _) = grid.center(iy, best);
            assert!(x.abs() < 1e-9);
        }
    }

    #[test]
    fn round_trip_keeps_peak() {
        let cfg = RadarConfig::awr1843();
        let grid = CartesianGrid::field_of_view(&cfg, 512, 256);
        for &(pr, pa) in &[(44usize, 80usize), (60, 64), (30, 40), (90, 100)] {
            let ra = Array2::from_shape_fn((128, 128), |(m, a)| {
                let d2 = (m as f64 - pr as f64).powi(2) + (a as f64 - pa as f64).powi(2);
                (-d2 / 8.0).exp()
            });
            let back = cartesian_to_polar(&cfg, &polar_to_cartesian(&cfg, &ra, &grid), &grid);
            let (m, a) = argmax(&back);
            assert!(m.abs_diff(pr) <= 1 && a.abs_diff(pa) <= 1, "{pr},{pa} -> {m},{a}");
        }
    }
}
