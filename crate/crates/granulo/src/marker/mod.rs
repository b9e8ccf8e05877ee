//! Fiducial marker detection and pixel-to-millimeter calibration.

mod detect;
mod dictionary;
mod homography;

pub use detect::{
    calibrate, detect_marker, detect_marker_with, CalibrationResult, DetectParams,
    MarkerDetection, MarkerError,
};
pub use dictionary::{DictionaryError, MarkerDictionary};
pub use homography::Homography;
