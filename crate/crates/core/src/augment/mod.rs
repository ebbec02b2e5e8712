//! Radar-aware data augmentation: flipping, translating in range and angle,
//! noise interpolation of vacated cells, and mixing.

mod gain;
mod geometry;
mod ops;
mod recipe;

pub use gain::GainProfile;
pub use geometry::{
    cartesian_point_to_polar, cartesian_to_polar, polar_point_to_cartesian, polar_to_cartesian, CartesianGrid,
};
pub use ops::{
    angle_shift_cells, flip_angle_axis, flip_augmented, flip_horizontal, interpolate_blanks, mix, noise_pool,
    range_shift_cells, translate_angle, translate_angle_augmented, translate_range, translate_range_augmented,
    Augmented, TargetLocation, NOISE_POOL_FRACTION, SUPPORT_HALF_WIDTH,
};
pub use recipe::{apply_recipe, AugmentOp};
