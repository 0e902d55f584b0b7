mod bar;
mod cobar;
mod maps;
mod stabilize;

pub use bar::{bar, BarWord, TruncatedBarCocategory};
pub use cobar::{cobar, rectify, TruncatedDGCategory};
pub use maps::{
    check_stage_inclusion, counit_map, stage_inclusion, triangle_on_letters, unit_map, CounitMap, InclusionCheck, UnitMap,
};
pub use stabilize::{stabilization_report, stages, StabilizationEntry, StabilizationReport};
