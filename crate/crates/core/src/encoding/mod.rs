//! Classical video <-> QVNEQR ensemble conversion, register layout, and the
//! JSON / PGM video formats.

mod codec;
mod layout;
pub mod pgm;
mod video;

pub use codec::{decode_color, decode_histogram, decode_segmentation, encode_video, video_table};
pub use layout::{layout_for, Register, RegisterLayout, MAX_BIT_DEPTH};
pub use video::{validate_video, Frame, Video, Violation};
