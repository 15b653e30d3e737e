//! Laminar families, sparsity certificates and the set machinery built on them.

mod build;
mod cover;
mod laminar;
mod serial;
mod set;
mod sparse;
mod stratify;

pub use build::{build_random_sparse, build_tower, corner_cube, full_binary, tower_cubes, ChildSelector};
pub use cover::{
    best_cover, cover_shifted_grids, dominate_by_martingale, grid_interval, Ambient, CoverEntry, Domination,
    FiniteMartingaleCover, COVER_CONSTANT, GRID_COUNT,
};
pub use laminar::{verify_laminar, MartingaleCollection};
pub use serial::{CollectionDoc, ShearMeta};
pub use set::MeasSet;
pub use sparse::{
    carleson_constant, gamma_to_f64, generation_cells, generation_indices, generation_union, generations,
    max_sparsity, nesting_ratio, sparsity_constant, Gamma, Portion, SparseCollection,
};
pub use stratify::{bucket_for, log_plus, stratify_by_average, Stratification};
