//! Kripke models, the satisfaction relation, frame conditions and paths.

mod eval;
mod frame;
mod model;
mod path;
mod random;
mod relation;

pub use eval::{
    compose_relation, satisfies, truth_set, valid_on_model, Evaluator, Mode, SemanticsError,
};
pub use frame::{
    condition_violations, frame_check, frame_violations, Condition, FrameClass, FrameViolation,
};
pub use model::{KripkeModel, ModelError, ModelJson};
pub use path::{ModelPath, Path, PathError};
pub use random::{random_model, random_relation};
pub use relation::Relation;
