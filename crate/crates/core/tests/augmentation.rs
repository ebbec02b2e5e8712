mod common;

use common::{angle_trial, process, range_trial, resynthesis_mismatch};
use radcube::augment::{
    flip_augmented, flip_horizontal, interpolate_blanks, mix, noise_pool, translate_angle, translate_range,
    GainProfile, TargetLocation,
};
use radcube::pipeline::RvaCube;
use radcube::radar::{ObjectClass, PointTarget, RadarConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn location(t: &PointTarget) -> TargetLocation {
    TargetLocation {
        range: t.range,
        azimuth: t.azimuth,
    }
}

#[test]
fn range_translation_matches_resynthesis() {
    let cfg = RadarConfig::awr1843();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..30 {
        let (t, dr, moved) = range_trial(&mut rng, &cfg);
        let out = translate_range(&cfg, &process(&cfg, &[t]).cube, dr, &[location(&t)]).unwrap();
        assert!((out.targets[0].azimuth - moved.azimuth).abs() < 1e-12);
        if let Some(why) = resynthesis_mismatch(&out.cube, &process(&cfg, &[moved]).cube) {
            panic!("{t:?} dr={dr}: {why}");
        }
    }
}

#[test]
fn angle_translation_matches_resynthesis() {
    let cfg = RadarConfig::awr1843();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let (t, dtheta, moved) = angle_trial(&mut rng, &cfg);
        let cube = process(&cfg, &[t]).cube;
        let out = translate_angle(&cfg, &cube, dtheta, &[location(&t)], &GainProfile::uniform()).unwrap();
        if let Some(why) = resynthesis_mismatch(&out.cube, &process(&cfg, &[moved]).cube) {
            panic!("{t:?} dtheta={dtheta}: {why}");
        }
        // uniform gain: the target's power only moves
        let (r, _, _) = cube.argmax().0;
        let slab = |c: &RvaCube| -> f64 {
            c.data
                .slice(ndarray::s![r - 2..=r + 2, .., ..])
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        };
        assert!((slab(&out.cube) / slab(&cube) - 1.0).abs() < 0.02);
    }
}

#[test]
fn range_round_trip_restores_peak() {
    let cfg = RadarConfig::awr1843();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let (t, dr, _) = range_trial(&mut rng, &cfg);
        let cube = process(&cfg, &[t]).cube;
        let there = translate_range(&cfg, &cube, dr, &[location(&t)]).unwrap();
        let back = radcube::augment::translate_range_augmented(&cfg, &there, -dr).unwrap();
        let (p0, m0) = cube.argmax();
        let (p1, m1) = back.cube.argmax();
        assert!(p0.0.abs_diff(p1.0) <= 1 && p0.1 == p1.1 && p0.2.abs_diff(p1.2) <= 1);
        assert!((m1 / m0 - 1.0).abs() < 0.02);
        assert!((back.targets[0].range - t.range).abs() < 1e-9);
    }
}

#[test]
fn flip_and_mix_identities_hold_exactly() {
    let cfg = RadarConfig::awr1843();
    let a = PointTarget::new(8.0, 0.4, 1.0, 1.0, ObjectClass::Car);
    let b = PointTarget::new(14.0, -0.2, -2.5, 0.7, ObjectClass::Pedestrian);
    let (ca, cb) = (process(&cfg, &[a]).cube, process(&cfg, &[b]).cube);
    assert_eq!(flip_horizontal(&flip_horizontal(&ca)), ca);
    let sum = mix(&ca, &cb).unwrap();
    assert_eq!(sum.data, &ca.data + &cb.data);
    assert_eq!(
        flip_horizontal(&sum),
        mix(&flip_horizontal(&ca), &flip_horizontal(&cb)).unwrap()
    );
    let state = radcube::augment::Augmented::untouched(ca.clone(), vec![location(&a)]);
    let twice = flip_augmented(&flip_augmented(&state));
    assert_eq!(twice, state);
    // mirrored target peaks at the mirrored angle bin
    let flipped = flip_horizontal(&ca).argmax().0;
    let original = ca.argmax().0;
    assert_eq!(flipped.2, 128 - original.2);
    assert_eq!(mix(&ca, &RvaCube::zeros(&cfg)).unwrap(), ca);
}

#[test]
fn vacated_cells_refill_from_the_quiet_floor() {
    let cfg = RadarConfig::awr1843();
    let t = PointTarget::new(9.0, 0.2, 0.5, 1.0, ObjectClass::Cyclist);
    let cube = process(&cfg, &[t]).cube;
    let out = translate_range(&cfg, &cube, 4.0, &[location(&t)]).unwrap();
    let blanks = out.blank.iter().filter(|&&b| b).count();
    assert_eq!(blanks, 5 * 128 * 128);
    let pool = noise_pool(&out.cube.data, &out.blank).unwrap();
    let ceiling = pool.iter().cloned().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let filled = interpolate_blanks(&out.cube.data, &out.blank, &mut rng).unwrap();
    for ((z, &b), orig) in filled.iter().zip(out.blank.iter()).zip(out.cube.data.iter()) {
        if b {
            assert!(z.norm() <= ceiling * (1.0 + 1e-12));
        } else {
            assert_eq!(z, orig);
        }
    }
    let again = interpolate_blanks(&out.cube.data, &out.blank, &mut ChaCha8Rng::seed_from_u64(33)).unwrap();
    assert_eq!(filled, again);
}

#[test]
fn envelope_violations_are_domain_errors() {
    let cfg = RadarConfig::awr1843();
    let t = PointTarget::new(5.0, 1.2, 0.0, 1.0, ObjectClass::Car);
    let cube = process(&cfg, &[t]).cube;
    assert!(translate_range(&cfg, &cube, -6.0, &[location(&t)]).is_err());
    assert!(translate_range(&cfg, &cube, 30.0, &[location(&t)]).is_err());
    assert!(translate_angle(&cfg, &cube, 0.5, &[location(&t)], &GainProfile::uniform()).is_err());
}
