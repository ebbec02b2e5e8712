//! Multi-view feature fusion, center-point labels and the training loss.
//! All kernels are forward-only.

mod features;
mod labels;
mod loss;

pub use features::{fuse_features, FeatureKind, FeatureTensor};
pub use labels::{centers_from_scene, default_sigma, rasterize_labels, Center, LabelMap};
pub use loss::{combined_loss, focal_loss, LossParams, EPS};
