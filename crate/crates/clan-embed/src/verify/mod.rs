//! Independent oracles and instance generators.

mod distortion;
mod euler;
mod generate;
mod girth;
mod path;

pub use distortion::{verify_clan_distortion, Host, VerifyReport};
pub use euler::{euler_tightness_check, EulerCheck, Verdict};
pub use generate::{gen_girth_instance, subdivide, GirthInstance, GirthKind, MAX_ATTEMPTS};
pub use girth::girth;
pub use path::path_distortion_eval;
