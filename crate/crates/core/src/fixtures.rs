//! Hand-coded data shipped with the library.

use crate::localization::{LocalizationDatum, Relabel};
use crate::wire::{datum_from_json, decode_relabel, RelabelEntryWire};

pub const S3_ON_P2_JSON: &str = include_str!("../fixtures/s3_p2.json");
pub const S3_ON_P2_RELABEL_JSON: &str = include_str!("../fixtures/s3_p2_relabel.json");

/// `S_3` permuting the homogeneous coordinates of `P^2`.
///
/// A transposition fixes a line and a point with normal angle `1/2`; a
/// 3-cycle fixes the three eigenlines, each with normal angles `1/3, 2/3`.
pub fn s3_on_p2() -> LocalizationDatum {
    datum_from_json(S3_ON_P2_JSON).expect("bundled fixture is valid")
}

/// Component identifications between the conjugate elements of [`s3_on_p2`].
pub fn s3_on_p2_relabel() -> Relabel {
    let entries: Vec<RelabelEntryWire> = serde_json::from_str(S3_ON_P2_RELABEL_JSON).expect("bundled fixture is valid");
    decode_relabel(&entries)
}
