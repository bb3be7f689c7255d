pub mod error;
pub mod group;
pub mod mp;
pub mod numerics;
pub mod precision;
pub mod relations;
pub mod symbolic;
pub mod verify;

pub use error::Error;
pub use group::{CosetLabel, GroupElement, MatrixGroup};
pub use relations::{IdentityCheck, Relation, RelationKind, RelationTerm};
pub use symbolic::{AffineForm, CoefficientExpression};
pub use numerics::ParameterPoint;
pub use precision::{EvaluationResult, Method, PrecisionConfig};
pub use verify::{PointResidual, ResidualReport, SampleSpec};

pub type Result<T> = std::result::Result<T, Error>;
