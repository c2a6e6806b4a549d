mod constructions;
mod formula;
mod frame;
mod vc;
mod verify;

pub use constructions::{
    reduce_colorful, reduce_k_minus_e, reduce_kh_i2, reduce_khh, reduce_kvx, star_hint, ColorfulShape, Construction,
    Counts, DeletionInstance, Manifest,
};
pub use formula::{clean_formulas, CleanViolation, Formula};
pub use frame::{assign_functions, rows_for, FrameLayout, Gadget, LCopy, Side, VariableGadget};
pub use vc::{min_vertex_cover, reduce_vc_colorful, VcKind, VcLayout};
pub use verify::{
    verify_reduction, verify_vc, ComponentCheck, CoverRelation, OccurrenceCheck, ReductionReport, ShapeCheck,
    VerifyOptions,
};
