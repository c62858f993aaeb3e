pub mod fibered;
pub mod format;
pub mod localmodel;
pub mod presets;
pub mod quintic;
pub mod relations;
pub mod surgery;
pub mod zlinalg;
