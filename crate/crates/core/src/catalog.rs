//! Small named categories used as fixtures and by the command line tool.

use crate::ainf::AInfCategory;
use crate::exactlin::FieldSpec;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["k", "a2", "m3", "contractible", "disjoint-pair", "matrix-units", "non-associative"];

pub fn by_name(name: &str, field: FieldSpec) -> Option<AInfCategory> {
    Some(match name {
        "k" => point(field),
        "a2" => a2_path(field),
        "m3" => m3_example(field),
        "contractible" => contractible_extension(field),
        "disjoint-pair" => disjoint_pair(field),
        "matrix-units" => matrix_units(field),
        "non-associative" => non_associative(field),
        _ => return None,
    })
}

/// One object with endomorphisms `k·id`.
pub fn point(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field).object("X").build().expect("valid fixture")
}

/// Path category of the quiver `1 → 2`, arrow in degree 0.
pub fn a2_path(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field).objects(&["1", "2"]).morphism("f", "1", "2", 0).build().expect("valid fixture")
}

/// One object, `x` in degree 1, `y` in degree 2, `m_3(x,x,x) = y` and
/// every other operation on non-units zero.
pub fn m3_example(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field)
        .object("X")
        .morphism("x", "X", "X", 1)
        .morphism("y", "X", "X", 2)
        .op_i(&["x", "x", "x"], &[("y", 1)])
        .build()
        .expect("valid fixture")
}

/// `k` with an acyclic summand `u ↦ v` (degrees 0 and 1) adjoined to the
/// endomorphisms; products of non-units vanish.
pub fn contractible_extension(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field)
        .object("X")
        .morphism("u", "X", "X", 0)
        .morphism("v", "X", "X", 1)
        .op_i(&["u"], &[("v", 1)])
        .build()
        .expect("valid fixture")
}

/// Two objects with no morphisms between them.
pub fn disjoint_pair(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field).objects(&["X", "Y"]).build().expect("valid fixture")
}

/// Two isomorphic objects: `ψ∘φ = id_X`, `φ∘ψ = id_Z`.
pub fn matrix_units(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field)
        .objects(&["X", "Z"])
        .morphism("phi", "X", "Z", 0)
        .morphism("psi", "Z", "X", 0)
        .op_i(&["psi", "phi"], &[("id_X", 1)])
        .op_i(&["phi", "psi"], &[("id_Z", 1)])
        .build()
        .expect("valid fixture")
}

/// A path of three arrows whose two ways of composing disagree by a factor 2.
pub fn non_associative(field: FieldSpec) -> AInfCategory {
    AInfCategory::builder(field)
        .objects(&["1", "2", "3", "4"])
        .morphism("f", "1", "2", 0)
        .morphism("g", "2", "3", 0)
        .morphism("h", "3", "4", 0)
        .morphism("gf", "1", "3", 0)
        .morphism("hg", "2", "4", 0)
        .morphism("hgf", "1", "4", 0)
        .op_i(&["g", "f"], &[("gf", 1)])
        .op_i(&["h", "g"], &[("hg", 1)])
        .op_i(&["h", "gf"], &[("hgf", 1)])
        .op_i(&["hg", "f"], &[("hgf", 2)])
        .build()
        .expect("valid fixture")
}
