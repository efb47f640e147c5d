pub mod bundle;
pub mod cyclo;
pub mod error;
pub mod fixtures;
pub mod localization;
pub mod motivic;
pub mod quotient;
pub mod series;
pub mod verify;
pub mod wire;
pub mod ycoeff;

pub use cyclo::{root_of_unity, Angle, Cyclotomic, Rational};
pub use error::{Error, Result};
pub use series::{compose_template, template_coefficients, RingModel, TemplateId, TruncSeries};
pub use ycoeff::YCoeff;
