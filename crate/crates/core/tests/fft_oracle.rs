mod common;

use common::{dft, random_array3, random_complex, rel_err, small_config};
use ndarray::Array3;
use num_complex::Complex64;
use radcube::fft::{self, Window};
use radcube::pipeline::{angle_fft, range_fft, velocity_fft, RvSpectrum};
use radcube::radar::{FftPoints, RadarConfig, RawFrame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[test]
fn padded_transform_matches_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1usize, 2, 3, 7, 8, 16, 31, 64, 100, 127, 128, 200, 255, 256] {
        for len in [n.div_ceil(3), n] {
            let x: Vec<_> = (0..len).map(|_| random_complex(&mut rng)).collect();
            for window in [Window::Rectangular, Window::Hann] {
                let taper = window.coefficients(len);
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                fft::forward_padded(&x, &taper, &mut out);
                let err = rel_err(&out, &dft(&x, &taper, n, false));
                assert!(err <= TOL, "n={n} len={len} {window:?}: {err:e}");
            }
        }
    }
}

#[test]
fn shifts_move_zero_to_center() {
    let mut v: Vec<usize> = (0..8).collect();
    fft::fftshift(&mut v);
    assert_eq!(v, [4, 5, 6, 7, 0, 1, 2, 3]);
    fft::ifftshift(&mut v);
    assert_eq!(v, (0..8).collect::<Vec<_>>());
}

fn check_range(cfg: &RadarConfig, window: Window, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = random_array3(
        &mut rng,
        (cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.num_rx_physical),
    );
    let frame = RawFrame::from_samples(cfg, data.clone()).unwrap();
    let out = range_fft(cfg, &frame, window);
    let taper = window.coefficients(cfg.samples_per_chirp);
    for k in 0..cfg.chirps_per_frame {
        for p in 0..cfg.num_rx_physical {
            let col: Vec<_> = data.slice(ndarray::s![.., k, p]).to_vec();
            let expected = dft(&col, &taper, cfg.fft_points.range, false);
            let got: Vec<_> = out.data.slice(ndarray::s![.., k, p]).to_vec();
            assert!(rel_err(&got, &expected) <= TOL);
        }
    }
}

#[test]
fn range_stage_matches_dft() {
    let mut cfg = small_config();
    check_range(&cfg, Window::Rectangular, 2);
    check_range(&cfg, Window::Hann, 3);
    cfg.samples_per_chirp = 150;
    cfg.chirps_per_frame = 4;
    cfg.fft_points.range = 256;
    check_range(&cfg, Window::Hann, 4);
}

fn check_velocity(cfg: &RadarConfig, window: Window, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mr = cfg.fft_points.range;
    let frame = RawFrame::zeros(cfg);
    let profile = radcube::pipeline::RangeProfile {
        data: random_array3(&mut rng, (mr, cfg.chirps_per_frame, cfg.num_rx_physical)),
        tx_schedule: frame.tx_schedule,
    };
    let out = velocity_fft(cfg, &profile, window).unwrap();
    let mv = cfg.fft_points.velocity;
    let cycles = (cfg.chirps_per_frame / cfg.num_tx).min(mv);
    let taper = window.coefficients(cycles);
    for m in (0..mr).step_by(5) {
        for tx in 0..cfg.num_tx {
            for p in 0..cfg.num_rx_physical {
                let slow: Vec<_> = (0..cycles).map(|c| profile.data[[m, c * cfg.num_tx + tx, p]]).collect();
                let expected = dft(&slow, &taper, mv, true);
                let q = tx * cfg.num_rx_physical + p;
                let got: Vec<_> = out.data.slice(ndarray::s![m, .., q]).to_vec();
                assert!(rel_err(&got, &expected) <= TOL, "m={m} q={q}");
            }
        }
    }
}

#[test]
fn velocity_stage_matches_dft() {
    let mut cfg = small_config();
    check_velocity(&cfg, Window::Rectangular, 5);
    check_velocity(&cfg, Window::Hann, 6);
    // odd chirp count: the last incomplete cycle is dropped
    cfg.chirps_per_frame = 255;
    cfg.fft_points.velocity = 128;
    check_velocity(&cfg, Window::Rectangular, 7);
    cfg.chirps_per_frame = 300;
    cfg.fft_points.velocity = 256;
    cfg.fft_points.range = 16;
    cfg.samples_per_chirp = 16;
    check_velocity(&cfg, Window::Hann, 8);
}

fn check_angle(cfg: &RadarConfig, window: Window, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = cfg.fft_points;
    let nvirt = cfg.virtual_elements();
    let spectrum = RvSpectrum {
        data: random_array3(&mut rng, (p.range, p.velocity, nvirt)),
    };
    let out = angle_fft(cfg, &spectrum, window);
    let taper = window.coefficients(nvirt);
    for m in (0..p.range).step_by(7) {
        for v in (0..p.velocity).step_by(3) {
            let x: Vec<_> = spectrum.data.slice(ndarray::s![m, v, ..]).to_vec();
            let expected = dft(&x, &taper, p.angle, true);
            let got: Vec<_> = out.data.slice(ndarray::s![m, v, ..]).to_vec();
            assert!(rel_err(&got, &expected) <= TOL);
        }
    }
}

#[test]
fn angle_stage_matches_dft() {
    let mut cfg = small_config();
    check_angle(&cfg, Window::Rectangular, 9);
    check_angle(&cfg, Window::Hann, 10);
    cfg.fft_points = FftPoints {
        range: 8,
        velocity: 4,
        angle: 256,
    };
    cfg.samples_per_chirp = 8;
    check_angle(&cfg, Window::Rectangular, 11);
}

#[test]
fn stages_are_linear() {
    let cfg = small_config();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let dims = (cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.num_rx_physical);
    let (a, b) = (random_array3(&mut rng, dims), random_array3(&mut rng, dims));
    let (ca, cb) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
    let mixed: Array3<Complex64> = a.mapv(|z| z * ca) + b.mapv(|z| z * cb);
    let run = |d: &Array3<Complex64>| {
        let f = RawFrame::from_samples(&cfg, d.clone()).unwrap();
        let r = range_fft(&cfg, &f, Window::Hann);
        let v = velocity_fft(&cfg, &r, Window::Hann).unwrap();
        angle_fft(&cfg, &v, Window::Hann).data
    };
    let expected = run(&a).mapv(|z| z * ca) + run(&b).mapv(|z| z * cb);
    assert!(rel_err(&run(&mixed), &expected) <= TOL);
}

#[test]
fn parseval_on_range_stage() {
    let cfg = small_config();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let data = random_array3(
        &mut rng,
        (cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.num_rx_physical),
    );
    let energy: f64 = data.iter().map(|z| z.norm_sqr()).sum();
    let frame = RawFrame::from_samples(&cfg, data).unwrap();
    let out = range_fft(&cfg, &frame, Window::Rectangular);
    let spectral: f64 = out.data.iter().map(|z| z.norm_sqr()).sum();
    let n = cfg.fft_points.range as f64;
    assert!((spectral / n - energy).abs() <= 1e-9 * energy);
}
