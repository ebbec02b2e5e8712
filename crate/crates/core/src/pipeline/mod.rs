//! 3-DFFT preprocessing: raw TDM-MIMO frames to RVA cubes and RA/RV/VA views.

mod cfar;
mod stages;
mod views;

pub use cfar::{ca_cfar_2d, CfarDetection, CfarParams};
pub use stages::{
    angle_fft, doppler_compensate, process_frame, range_angle_snapshot, range_fft, rv_power, velocity_fft,
    FrameProducts, ProcessingConfig, RangeProfile, RvSpectrum, RvaCube,
};
pub use views::{
    process_sequence, range_velocity_power, slice_views, velocity_angle_power, SequenceOptions, ViewKind, ViewSet,
};
