pub mod closure;
pub mod construction;
pub mod proof;
pub mod semantics;
pub mod solver;
pub mod syntax;
