use std::collections::HashMap;
use std::path::Path;

use ndarray::{Array2, Array3, ArrayD, Axis, Ix3, Ix4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use radcube::augment::{apply_recipe, AugmentOp, Augmented, GainProfile, TargetLocation};
use radcube::complexity::{bundled, compare, ModelSpec, BUNDLED};
use radcube::eval::{evaluate_scenes, DistanceThresholds, SceneInput};
use radcube::fusion::{centers_from_scene, combined_loss, focal_loss, rasterize_labels, LossParams};
use radcube::pipeline::{
    process_frame, range_velocity_power, slice_views, velocity_angle_power, ProcessingConfig, RvaCube, ViewKind,
};
use radcube::radar::{synthesize_frame, ChirpPhaseState, NoiseSpec, ObjectClass, RadarConfig, RawFrame};
use radcube::rcube::Rcube;
use radcube::render::{render_ppm, Colormap, RenderOptions};
use radcube::{Error, Result};

use crate::io::{self, CUBE_TAG, LABEL_TAG, RAW_TAG};
use crate::{ConfigArgs, Metric, ProcessingArgs, View};

fn view_kind(view: View) -> ViewKind {
    match view {
        View::Ra => ViewKind::RangeAngle,
        View::Rv => ViewKind::RangeVelocity,
        View::Va => ViewKind::VelocityAngle,
    }
}

fn view_tag(kind: ViewKind) -> String {
    format!("frame,{}", kind.axes())
}

/// Frame `t` of a `[frame, ...]` tensor as a 3-D array.
fn frame_of<T: Clone>(data: &ArrayD<T>, t: usize) -> Array3<T> {
    data.index_axis(Axis(0), t)
        .to_owned()
        .into_dimensionality::<Ix3>()
        .expect("rank checked by caller")
}

fn stack<T: Clone>(frames: &[Array3<T>]) -> Result<ArrayD<T>> {
    let views: Vec<_> = frames.iter().map(|f| f.view()).collect();
    ndarray::stack(Axis(0), &views)
        .map(|a| a.into_dyn())
        .map_err(|e| Error::Shape(e.to_string()))
}

fn stack2<T: Clone>(frames: &[Array2<T>]) -> Result<ArrayD<T>> {
    let views: Vec<_> = frames.iter().map(|f| f.view()).collect();
    ndarray::stack(Axis(0), &views)
        .map(|a| a.into_dyn())
        .map_err(|e| Error::Shape(e.to_string()))
}

fn raw_frames(cfg: &RadarConfig, container: &Rcube) -> Result<Vec<RawFrame>> {
    container.expect(4, Some(RAW_TAG))?;
    let data = container.to_complex64();
    (0..data.shape()[0])
        .map(|t| RawFrame::from_samples(cfg, frame_of(&data, t)))
        .collect()
}

fn rva_frames(container: &Rcube) -> Result<Vec<RvaCube>> {
    container.expect(4, Some(CUBE_TAG))?;
    let data = container.to_complex64();
    Ok((0..data.shape()[0])
        .map(|t| RvaCube {
            data: frame_of(&data, t),
        })
        .collect())
}

pub fn simulate(scene: &Path, config: &ConfigArgs, out: &Path, seed: u64, noise: f64) -> Result<()> {
    let cfg = io::radar_config(config)?;
    let scene = io::scene(scene)?;
    scene.validate(&cfg)?;
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::Config(format!("noise must be finite and >= 0, got {noise}")));
    }
    let noise = (noise > 0.0).then_some(NoiseSpec { std_dev: noise, seed });
    let frames = scene
        .frames
        .par_iter()
        .enumerate()
        .map(|(t, targets)| {
            let state = ChirpPhaseState {
                frame_index: t as u64,
                noise,
            };
            synthesize_frame(&cfg, targets, state).map(|f| f.data)
        })
        .collect::<Result<Vec<_>>>()?;
    let data = if frames.is_empty() {
        ArrayD::zeros(vec![
            0,
            cfg.samples_per_chirp,
            cfg.chirps_per_frame,
            cfg.num_rx_physical,
        ])
    } else {
        stack(&frames)?
    };
    io::write_rcube(out, &Rcube::from_complex64(RAW_TAG, data.view()))
}

#[derive(Serialize)]
struct DetectionRecord {
    frame: usize,
    range_bin: usize,
    velocity_bin: usize,
    power: f64,
    noise_level: f64,
}

pub fn process(
    input: &Path,
    config: &ConfigArgs,
    processing: &ProcessingArgs,
    out: &Path,
    detections: Option<&Path>,
) -> Result<()> {
    let cfg = io::radar_config(config)?;
    let proc = io::processing_config(processing)?;
    let raw = raw_frames(&cfg, &io::read_rcube(input)?)?;
    let products = raw
        .par_iter()
        .map(|frame| process_frame(&cfg, &proc, frame).map(|p| (p.cube.data, p.detections)))
        .collect::<Result<Vec<_>>>()?;
    let p = cfg.fft_points;
    let (cubes, found): (Vec<_>, Vec<_>) = products.into_iter().unzip();
    let data = if cubes.is_empty() {
        ArrayD::zeros(vec![0, p.range, p.velocity, p.angle])
    } else {
        stack(&cubes)?
    };
    io::write_rcube(out, &Rcube::from_complex64(CUBE_TAG, data.view()))?;
    if let Some(path) = detections {
        let records: Vec<_> = found
            .iter()
            .enumerate()
            .flat_map(|(t, dets)| {
                dets.iter().map(move |d| DetectionRecord {
                    frame: t,
                    range_bin: d.range_bin,
                    velocity_bin: d.velocity_bin,
                    power: d.magnitude,
                    noise_level: d.noise_level,
                })
            })
            .collect();
        io::write_bytes(path, serde_json::to_string_pretty(&records)?.as_bytes())?;
    }
    Ok(())
}

/// One 2-D map per frame, real (power) or complex (RA).
enum Maps {
    Complex(Vec<Array2<Complex64>>),
    Power(Vec<Array2<f64>>),
}

fn maps_from(container: &Rcube, view: View, cfg: &RadarConfig, proc: &ProcessingConfig, chirp: usize) -> Result<Maps> {
    if container.tag == RAW_TAG {
        let raw = raw_frames(cfg, container)?;
        let views = raw
            .par_iter()
            .enumerate()
            .map(|(t, frame)| slice_views(cfg, proc, &process_frame(cfg, proc, frame)?, chirp, t))
            .collect::<Result<Vec<_>>>()?;
        return Ok(match view {
            View::Ra => Maps::Complex(views.into_iter().map(|v| v.ra).collect()),
            View::Rv => Maps::Power(views.into_iter().map(|v| v.rv).collect()),
            View::Va => Maps::Power(views.into_iter().map(|v| v.va).collect()),
        });
    }
    if container.tag == CUBE_TAG {
        let cubes = rva_frames(container)?;
        return match view {
            View::Ra => Err(Error::Config(
                "the RA view is taken from a single chirp cycle; pass the raw container".into(),
            )),
            View::Rv => Ok(Maps::Power(cubes.par_iter().map(range_velocity_power).collect())),
            View::Va => Ok(Maps::Power(cubes.par_iter().map(velocity_angle_power).collect())),
        };
    }
    Err(Error::Format(format!(
        "expected a `{RAW_TAG}` or `{CUBE_TAG}` container, found `{}`",
        container.tag
    )))
}

pub fn slice(
    input: &Path,
    view: View,
    config: &ConfigArgs,
    processing: &ProcessingArgs,
    chirp: usize,
    out: &Path,
) -> Result<()> {
    let cfg = io::radar_config(config)?;
    let proc = io::processing_config(processing)?;
    let tag = view_tag(view_kind(view));
    let container = match maps_from(&io::read_rcube(input)?, view, &cfg, &proc, chirp)? {
        Maps::Complex(maps) => Rcube::from_complex64(tag, stack2(&maps)?.view()),
        Maps::Power(maps) => Rcube::from_real64(tag, stack2(&maps)?.view()),
    };
    io::write_rcube(out, &container)
}

pub struct AugmentArgs<'a> {
    pub input: &'a Path,
    pub recipe: &'a Path,
    pub scene: Option<&'a Path>,
    pub config: &'a ConfigArgs,
    pub gain: Option<&'a Path>,
    pub seed: u64,
    pub out: &'a Path,
    pub scene_out: Option<&'a Path>,
}

pub fn augment(args: AugmentArgs<'_>) -> Result<()> {
    let cfg = io::radar_config(args.config)?;
    let ops = AugmentOp::parse_recipe(&io::read_text(args.recipe)?)?;
    let cubes = rva_frames(&io::read_rcube(args.input)?)?;
    let gain = match args.gain {
        Some(path) => GainProfile::from_table(serde_json::from_str(&io::read_text(path)?)?)?,
        None => GainProfile::uniform(),
    };

    let moves = ops
        .iter()
        .any(|op| matches!(op, AugmentOp::TranslateRange { .. } | AugmentOp::TranslateAngle { .. }));
    let mut scene = match args.scene {
        Some(path) => Some(io::scene(path)?),
        None if moves || args.scene_out.is_some() => {
            return Err(Error::Config(
                "this recipe moves targets; pass the cube's --scene".into(),
            ))
        }
        None => None,
    };
    if let Some(s) = &scene {
        if s.frame_count() != cubes.len() {
            return Err(Error::Shape(format!(
                "scene has {} frames, cube has {}",
                s.frame_count(),
                cubes.len()
            )));
        }
    }

    // mix partners are resolved relative to the recipe file
    let base = args.recipe.parent().unwrap_or(Path::new("."));
    let mut partners: HashMap<String, Vec<RvaCube>> = HashMap::new();
    for op in &ops {
        if let AugmentOp::Mix { other } = op {
            if !partners.contains_key(other) {
                let frames = rva_frames(&io::read_rcube(&base.join(other))?)?;
                if frames.len() < cubes.len() {
                    return Err(Error::Shape(format!(
                        "{other} has {} frames, need {}",
                        frames.len(),
                        cubes.len()
                    )));
                }
                partners.insert(other.clone(), frames);
            }
        }
    }

    let results = cubes
        .into_par_iter()
        .enumerate()
        .map(|(t, cube)| {
            let targets = scene.as_ref().map_or_else(Vec::new, |s| {
                s.frames[t]
                    .iter()
                    .map(|p| TargetLocation {
                        range: p.range,
                        azimuth: p.azimuth,
                    })
                    .collect()
            });
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(t as u64);
            apply_recipe(
                &cfg,
                &gain,
                Augmented::untouched(cube, targets),
                &ops,
                &mut rng,
                |name| Ok(partners[name][t].clone()),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(s) = scene.as_mut() {
        for (frame, state) in s.frames.iter_mut().zip(&results) {
            for (target, moved) in frame.iter_mut().zip(&state.targets) {
                target.range = moved.range;
                target.azimuth = moved.azimuth;
            }
        }
    }
    let cubes: Vec<_> = results.into_iter().map(|s| s.cube.data).collect();
    let data = if cubes.is_empty() {
        let p = cfg.fft_points;
        ArrayD::zeros(vec![0, p.range, p.velocity, p.angle])
    } else {
        stack(&cubes)?
    };
    io::write_rcube(args.out, &Rcube::from_complex64(CUBE_TAG, data.view()))?;
    if let (Some(path), Some(s)) = (args.scene_out, &scene) {
        io::write_bytes(path, s.to_json().as_bytes())?;
    }
    Ok(())
}

pub fn label(scene: &Path, config: &ConfigArgs, out: &Path) -> Result<()> {
    let cfg = io::radar_config(config)?;
    let scene = io::scene(scene)?;
    scene.validate(&cfg)?;
    let centers = centers_from_scene(&cfg, &scene)?;
    let p = cfg.fft_points;
    let labels = rasterize_labels(scene.frame_count(), p.range, p.angle, &centers)?;
    io::write_rcube(out, &Rcube::from_real64(LABEL_TAG, labels.data.view()))
}

fn heatmap(path: &Path) -> Result<ndarray::Array4<f64>> {
    let container = io::read_rcube(path)?;
    container.expect(4, None)?;
    if container.shape()[3] != ObjectClass::ALL.len() {
        return Err(Error::Shape(format!(
            "{}: last axis holds {} classes, expected {}",
            path.display(),
            container.shape()[3],
            ObjectClass::ALL.len()
        )));
    }
    Ok(container
        .to_real64()?
        .into_dimensionality::<Ix4>()
        .expect("rank checked"))
}

pub fn loss(pred: &Path, truth: &Path, aux: Option<&Path>, params: LossParams, n_obj: Option<usize>) -> Result<f64> {
    let (pred, truth) = (heatmap(pred)?, heatmap(truth)?);
    let n_obj = n_obj.unwrap_or_else(|| truth.iter().filter(|&&y| y == 1.0).count());
    let params = params.with_n_obj(n_obj);
    match aux {
        Some(path) => combined_loss(pred.view(), heatmap(path)?.view(), truth.view(), &params),
        None => focal_loss(pred.view(), truth.view(), &params),
    }
}

pub fn eval(
    preds: &[std::path::PathBuf],
    scenes: &[std::path::PathBuf],
    config: &ConfigArgs,
    threshold: f64,
    csv: Option<&Path>,
) -> Result<()> {
    if preds.len() != scenes.len() {
        return Err(Error::Config(format!(
            "{} --pred but {} --scene arguments",
            preds.len(),
            scenes.len()
        )));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Config(format!("threshold {threshold} outside [0, 1]")));
    }
    let cfg = io::radar_config(config)?;
    let mut maps = Vec::with_capacity(preds.len());
    let mut truths = Vec::with_capacity(preds.len());
    for (pred, scene_path) in preds.iter().zip(scenes) {
        let map = heatmap(pred)?;
        let scene = io::scene(scene_path)?;
        scene.validate(&cfg)?;
        if scene.frame_count() != map.shape()[0] {
            return Err(Error::Shape(format!(
                "{} has {} frames, {} has {}",
                pred.display(),
                map.shape()[0],
                scene_path.display(),
                scene.frame_count()
            )));
        }
        truths.push(centers_from_scene(&cfg, &scene)?);
        maps.push(map);
    }
    let inputs: Vec<_> = maps
        .iter()
        .zip(&truths)
        .map(|(m, t)| SceneInput {
            pred: m.view(),
            truth: t,
        })
        .collect();
    let report = evaluate_scenes(&inputs, threshold, &DistanceThresholds::default());
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(path) = csv {
        io::write_bytes(path, report.to_csv().as_bytes())?;
    }
    Ok(())
}

fn load_model(name: &str) -> Result<ModelSpec> {
    if BUNDLED.iter().any(|(key, _)| *key == name) {
        bundled(name)
    } else {
        ModelSpec::from_json(&io::read_text(Path::new(name))?)
    }
}

#[derive(Serialize)]
struct ModelReport {
    name: String,
    flops: u128,
    params: u128,
    feature_map: u128,
}

#[derive(Serialize)]
struct FlopsReport {
    models: Vec<ModelReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ratios: Vec<radcube::complexity::Ratio>,
}

pub fn flops(names: &[String], metric: Metric, report: bool) -> Result<()> {
    let models = names.iter().map(|n| load_model(n)).collect::<Result<Vec<_>>>()?;
    if report {
        let doc = FlopsReport {
            models: models
                .iter()
                .map(|m| ModelReport {
                    name: m.name.clone(),
                    flops: m.flops(),
                    params: m.space().params,
                    feature_map: m.space().feature_map,
                })
                .collect(),
            ratios: if models.len() >= 2 {
                compare(&models)?
            } else {
                Vec::new()
            },
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    for m in &models {
        let value = match metric {
            Metric::Flops => m.flops(),
            Metric::Params => m.space().params,
            Metric::FeatureMap => m.space().feature_map,
        };
        println!("{value}");
    }
    Ok(())
}

pub struct RenderArgs<'a> {
    pub input: &'a Path,
    pub view: Option<View>,
    pub frame: usize,
    pub colormap: Colormap,
    pub floor_db: f64,
    pub config: &'a ConfigArgs,
    pub processing: &'a ProcessingArgs,
    pub chirp: usize,
    pub out: &'a Path,
}

pub fn render(args: RenderArgs<'_>) -> Result<()> {
    let container = io::read_rcube(args.input)?;
    let check_frame = |frames: usize| {
        if args.frame >= frames {
            Err(Error::Config(format!(
                "frame {} out of range, input has {frames}",
                args.frame
            )))
        } else {
            Ok(())
        }
    };
    let as_view = [View::Ra, View::Rv, View::Va]
        .into_iter()
        .find(|&v| container.tag == view_tag(view_kind(v)));

    let (map, power) = if let Some(found) = as_view {
        if args.view.is_some_and(|v| v != found) {
            return Err(Error::Config(format!("input already is the `{}` view", container.tag)));
        }
        container.expect(3, None)?;
        check_frame(container.shape()[0])?;
        let plane = container.to_complex64().index_axis_move(Axis(0), args.frame);
        let plane = plane.into_dimensionality::<ndarray::Ix2>().expect("rank checked");
        if container.is_complex() {
            (plane.mapv(|z| z.norm()), false)
        } else {
            (plane.mapv(|z| z.re), true)
        }
    } else {
        let view = args
            .view
            .ok_or_else(|| Error::Config(format!("--view is required for a `{}` container", container.tag)))?;
        check_frame(container.shape().first().copied().unwrap_or(0))?;
        let cfg = io::radar_config(args.config)?;
        let proc = io::processing_config(args.processing)?;
        // only the requested frame is processed
        let single = container_frame(&container, args.frame)?;
        match maps_from(&single, view, &cfg, &proc, args.chirp)? {
            Maps::Complex(mut maps) => (maps.swap_remove(0).mapv(|z| z.norm()), false),
            Maps::Power(mut maps) => (maps.swap_remove(0), true),
        }
    };
    let opts = RenderOptions {
        colormap: args.colormap,
        floor_db: args.floor_db,
        power,
    };
    io::write_bytes(args.out, &render_ppm(map.view(), &opts)?)
}

/// The same container cut down to a single frame.
fn container_frame(container: &Rcube, t: usize) -> Result<Rcube> {
    if container.shape().len() != 4 {
        return Err(Error::Format(format!(
            "expected a rank-4 `{RAW_TAG}` or `{CUBE_TAG}` container, `{}` has shape {:?}",
            container.tag,
            container.shape()
        )));
    }
    let cut = |p: &radcube::rcube::Payload| match p {
        radcube::rcube::Payload::Complex(a) => {
            radcube::rcube::Payload::Complex(a.slice_axis(Axis(0), (t..t + 1).into()).to_owned())
        }
        radcube::rcube::Payload::Real(a) => {
            radcube::rcube::Payload::Real(a.slice_axis(Axis(0), (t..t + 1).into()).to_owned())
        }
    };
    Ok(Rcube {
        tag: container.tag.clone(),
        payload: cut(&container.payload),
    })
}
