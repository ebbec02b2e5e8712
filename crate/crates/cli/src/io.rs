use std::path::Path;

use radcube::pipeline::ProcessingConfig;
use radcube::radar::{RadarConfig, Scene};
use radcube::rcube::Rcube;
use radcube::{Error, Result};

use crate::{ConfigArgs, ProcessingArgs};

pub const RAW_TAG: &str = "frame,sample,chirp,rx";
pub const CUBE_TAG: &str = "frame,range,velocity,angle";
pub const LABEL_TAG: &str = "frame,range,angle,class";

/// Keeps the path in I/O error messages.
fn with_path(path: &Path, err: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(err.kind(), format!("{}: {err}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| with_path(path, e))
}

pub fn read_rcube(path: &Path) -> Result<Rcube> {
    Rcube::read_path(path).map_err(|e| match e {
        Error::Io(io) => with_path(path, io),
        other => other,
    })
}

pub fn write_rcube(path: &Path, cube: &Rcube) -> Result<()> {
    write_bytes(path, &cube.to_bytes()?)
}

pub fn radar_config(args: &ConfigArgs) -> Result<RadarConfig> {
    match &args.config {
        Some(path) => RadarConfig::from_json(&read_text(path)?),
        None => Ok(RadarConfig::awr1843()),
    }
}

pub fn processing_config(args: &ProcessingArgs) -> Result<ProcessingConfig> {
    match &args.processing {
        Some(path) => Ok(serde_json::from_str(&read_text(path)?)?),
        None => Ok(ProcessingConfig::default()),
    }
}

pub fn scene(path: &Path) -> Result<Scene> {
    Scene::from_json(&read_text(path)?)
}
