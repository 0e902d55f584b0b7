//! Task operations and their mapping onto the core verifiers.

use rectify_core::ainf::{
    check_ainf_relations, check_functor_relations, cohomology_category, is_quasi_equivalence, AInfCategory, AInfLike, Verdict,
};
use rectify_core::barcobar::{counit_map, rectify, stabilization_report, unit_map};
use rectify_core::fibcheck::{is_acyclic_fibration, is_fibration};
use rectify_core::relcat::{
    check_dk_adjunction, check_localization_equivalence, check_relative_functor, effective_width, hammock_pi0, localize, AtBound,
    ClassStructure,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::{Entity, Manifest, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Validate,
    Cohomology,
    QuasiEquiv,
    Rectify,
    UnitCheck,
    CounitCheck,
    Stabilize,
    Localize,
    HammockPi0,
    DkAdjunction,
    LocEquiv,
    Fibration,
}

pub const DEFAULT_ARITY_BOUND: usize = 4;
pub const DEFAULT_LENGTH_BOUND: usize = 3;
pub const DEFAULT_WORD_BOUND: usize = 3;
pub const DEFAULT_WINDOW: (i32, i32) = (0, 0);

impl Op {
    pub const ALL: [Op; 12] = [
        Op::Validate,
        Op::Cohomology,
        Op::QuasiEquiv,
        Op::Rectify,
        Op::UnitCheck,
        Op::CounitCheck,
        Op::Stabilize,
        Op::Localize,
        Op::HammockPi0,
        Op::DkAdjunction,
        Op::LocEquiv,
        Op::Fibration,
    ];

    /// Kebab-case name, as used by subcommands.
    pub fn name(self) -> &'static str {
        match self {
            Op::Validate => "validate",
            Op::Cohomology => "cohomology",
            Op::QuasiEquiv => "quasi-equiv",
            Op::Rectify => "rectify",
            Op::UnitCheck => "unit-check",
            Op::CounitCheck => "counit-check",
            Op::Stabilize => "stabilize",
            Op::Localize => "localize",
            Op::HammockPi0 => "hammock-pi0",
            Op::DkAdjunction => "dk-adjunction",
            Op::LocEquiv => "loc-equiv",
            Op::Fibration => "fibration",
        }
    }

    /// Accepts kebab or snake case, plus the long names of the checks.
    pub fn parse(s: &str) -> Option<Op> {
        let s = s.replace('_', "-");
        match s.as_str() {
            "check-ainf-relations" | "check-relations" => Some(Op::Validate),
            "quasi-equivalence" | "is-quasi-equivalence" => Some(Op::QuasiEquiv),
            "check-dk-adjunction" => Some(Op::DkAdjunction),
            "check-localization-equivalence" | "localization-equivalence" => Some(Op::LocEquiv),
            "is-fibration" => Some(Op::Fibration),
            _ => Op::ALL.into_iter().find(|op| op.name() == s),
        }
    }

    pub fn accepts(self, e: &Entity) -> bool {
        match self {
            Op::Validate => true,
            Op::Cohomology | Op::Rectify | Op::UnitCheck | Op::CounitCheck | Op::Stabilize => matches!(e, Entity::Category(_)),
            Op::QuasiEquiv | Op::Fibration => matches!(e, Entity::Functor { .. }),
            Op::Localize | Op::HammockPi0 => matches!(e, Entity::RelativeCategory(_)),
            Op::DkAdjunction | Op::LocEquiv => matches!(e, Entity::Adjunction(_)),
        }
    }

    fn uses(self) -> [bool; 4] {
        // arity, length, word, window
        match self {
            Op::Validate => [true, false, false, false],
            Op::Cohomology | Op::QuasiEquiv => [false, false, false, true],
            Op::Rectify => [false, true, false, false],
            Op::UnitCheck => [true, true, false, true],
            Op::CounitCheck | Op::Stabilize => [false, true, false, true],
            Op::Localize | Op::HammockPi0 | Op::LocEquiv => [false, false, true, false],
            Op::DkAdjunction | Op::Fibration => [false; 4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    Error,
}

impl Status {
    fn of(v: Verdict) -> Status {
        match v {
            Verdict::True => Status::Pass,
            Verdict::False => Status::Fail,
            Verdict::Inconclusive => Status::Indeterminate,
        }
    }

    fn of_bool(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Command-line defaults for parameters a task leaves unset.
#[derive(Debug, Clone, Default)]
pub struct Defaults {
    pub arity_bound: Option<usize>,
    pub length_bound: Option<usize>,
    pub word_bound: Option<usize>,
    pub degree_window: Option<(i32, i32)>,
}

/// Effective parameters of one task, after defaults.
#[derive(Debug, Clone, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arity_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_window: Option<(i32, i32)>,
}

pub fn effective_params(task: &Task, defaults: &Defaults) -> Params {
    let [a, l, w, d] = task.op.uses();
    let p = &task.params;
    // Cohomology and quasi-equivalence compare every degree unless a window is given.
    let window_default = if matches!(task.op, Op::Cohomology | Op::QuasiEquiv) { None } else { Some(DEFAULT_WINDOW) };
    Params {
        arity_bound: a.then(|| p.arity_bound.or(defaults.arity_bound).unwrap_or(DEFAULT_ARITY_BOUND)),
        length_bound: l.then(|| p.length_bound.or(defaults.length_bound).unwrap_or(DEFAULT_LENGTH_BOUND)),
        word_bound: w.then(|| p.word_bound.or(defaults.word_bound).unwrap_or(DEFAULT_WORD_BOUND)),
        degree_window: if d { p.degree_window.or(defaults.degree_window).or(window_default) } else { None },
    }
}

pub struct Outcome {
    pub status: Status,
    pub result: Value,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn error(message: impl ToString) -> Outcome {
    Outcome { status: Status::Error, result: json!({ "message": message.to_string() }) }
}

fn hom_dims<C: AInfLike>(cat: &C, window: Option<(i32, i32)>) -> rectify_core::Result<Value> {
    let h = cohomology_category(cat, window)?;
    let lin = h.linear();
    let mut homs = Vec::new();
    for (x, xn) in lin.objects().iter().enumerate() {
        for (y, yn) in lin.objects().iter().enumerate() {
            let dims = lin.hom_dims(x, y);
            let classes: Vec<Value> = dims
                .keys()
                .map(|&d| json!({ "degree": d, "classes": lin.hom_basis(x, y, d).iter().map(|&c| lin.classes()[c].name.clone()).collect::<Vec<_>>() }))
                .collect();
            homs.push(json!({ "source": xn, "target": yn, "dims": dims.iter().map(|(d, n)| (d.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(), "basis": classes }));
        }
    }
    Ok(json!({ "window": h.window(), "homs": homs }))
}

fn classes_value(s: &ClassStructure) -> Value {
    let mut homs = Vec::new();
    for (x, xn) in s.objects().iter().enumerate() {
        for (y, yn) in s.objects().iter().enumerate() {
            let classes: Vec<Value> =
                s.hom(x, y).iter().map(|&c| json!({ "normal_form": s.classes()[c].normal_form, "size": s.classes()[c].size })).collect();
            homs.push(json!({ "source": xn, "target": yn, "classes": classes }));
        }
    }
    json!({ "width": s.width(), "class_count": s.classes().len(), "homs": homs })
}

fn category<'a>(m: &'a Manifest, name: &str) -> &'a AInfCategory {
    match &m.entities[name] {
        Entity::Category(c) => c,
        _ => unreachable!("validated task entity"),
    }
}

/// Runs one task. Core errors become an `error` outcome naming the cause.
pub fn execute(m: &Manifest, task: &Task, params: &Params) -> Outcome {
    match run(m, task, params) {
        Ok(o) => o,
        Err(e) => error(e),
    }
}

fn run(m: &Manifest, task: &Task, p: &Params) -> rectify_core::Result<Outcome> {
    let entity = &m.entities[&task.entity];
    let window = p.degree_window;
    let out = match (task.op, entity) {
        (Op::Validate, Entity::Category(c)) => {
            let r = check_ainf_relations(c, p.arity_bound.unwrap_or(DEFAULT_ARITY_BOUND).min(c.arity_bound()))?;
            Outcome { status: Status::of_bool(r.holds()), result: to_value(&r) }
        }
        (Op::Validate, Entity::Functor { source, target, functor }) => {
            let (s, t) = (category(m, source), category(m, target));
            let n = p.arity_bound.unwrap_or(DEFAULT_ARITY_BOUND).min(s.arity_bound()).min(t.arity_bound());
            let r = check_functor_relations(s, t, functor, n)?;
            Outcome { status: Status::of_bool(r.holds()), result: to_value(&r) }
        }
        (Op::Validate, Entity::RelativeFunctor(f)) => {
            let r = check_relative_functor(f);
            Outcome { status: Status::of_bool(r.holds()), result: to_value(&r) }
        }
        // Relative categories and adjunctions are fully checked when the manifest is validated.
        (Op::Validate, _) => Outcome { status: Status::Pass, result: json!({ "kind": entity.kind() }) },
        (Op::Cohomology, Entity::Category(c)) => Outcome { status: Status::Pass, result: hom_dims(c, window)? },
        (Op::QuasiEquiv, Entity::Functor { source, target, functor }) => {
            let cert = is_quasi_equivalence(category(m, source), category(m, target), functor, window)?;
            Outcome { status: Status::of(cert.verdict), result: to_value(&cert) }
        }
        (Op::Rectify, Entity::Category(c)) => {
            let l = p.length_bound.unwrap_or(DEFAULT_LENGTH_BOUND);
            // Construction fails unless b∘b = 0 and d∘d = 0 hold exactly.
            let stage = rectify(c, l)?;
            let result = json!({
                "bar_words": stage.bar().words().len(),
                "generators": stage.generators().len(),
                "bar_certified": true,
                "cobar_certified": true,
            });
            Outcome { status: Status::Pass, result }
        }
        (Op::UnitCheck, Entity::Category(c)) => {
            let l = p.length_bound.unwrap_or(DEFAULT_LENGTH_BOUND);
            let stage = rectify(c, l)?;
            let arity = p.arity_bound.unwrap_or(DEFAULT_ARITY_BOUND).min(l);
            let unit = unit_map(c, &stage, arity)?;
            let cert = is_quasi_equivalence(c, &stage, &unit.functor, window)?;
            let status = Status::of(Verdict::from_bool(unit.report.holds()).and(cert.verdict));
            Outcome { status, result: json!({ "relations": to_value(&unit.report), "quasi_equivalence": to_value(&cert) }) }
        }
        (Op::CounitCheck, Entity::Category(c)) => {
            let l = p.length_bound.unwrap_or(DEFAULT_LENGTH_BOUND);
            let stage = rectify(c, l)?;
            let counit = counit_map(c, &stage)?;
            let cert = is_quasi_equivalence(&stage, c, &counit.functor, window)?;
            let status = Status::of(Verdict::from_bool(counit.report.holds()).and(cert.verdict));
            Outcome { status, result: json!({ "relations": to_value(&counit.report), "quasi_equivalence": to_value(&cert) }) }
        }
        (Op::Stabilize, Entity::Category(c)) => {
            let l = p.length_bound.unwrap_or(DEFAULT_LENGTH_BOUND);
            let r = stabilization_report(c, l, window.unwrap_or(DEFAULT_WINDOW))?;
            let at = r.stabilized_at();
            let status = if at.is_some() { Status::Pass } else { Status::Indeterminate };
            Outcome { status, result: json!({ "stabilized_at": at, "report": to_value(&r) }) }
        }
        (Op::Localize, Entity::RelativeCategory(c)) => {
            let b = p.word_bound.unwrap_or(DEFAULT_WORD_BOUND);
            let loc = localize(c, b)?;
            let status = if loc.stabilized { Status::Pass } else { Status::Indeterminate };
            Outcome { status, result: json!({ "stabilized": loc.stabilized, "classes": classes_value(&loc) }) }
        }
        (Op::HammockPi0, Entity::RelativeCategory(c)) => {
            let b = p.word_bound.unwrap_or(DEFAULT_WORD_BOUND);
            let h = hammock_pi0(c, b)?;
            let status = match (h.comparison.is_isomorphism(), h.comparison.localization_stabilized) {
                (true, _) => Status::Pass,
                (false, true) => Status::Fail,
                (false, false) => Status::Indeterminate,
            };
            Outcome { status, result: json!({ "width": effective_width(b), "classes": classes_value(&h), "comparison": to_value(&h.comparison) }) }
        }
        (Op::DkAdjunction, Entity::Adjunction(d)) => {
            let r = check_dk_adjunction(d)?;
            Outcome { status: Status::of_bool(r.verdict), result: to_value(&r) }
        }
        (Op::LocEquiv, Entity::Adjunction(d)) => {
            let b = p.word_bound.unwrap_or(DEFAULT_WORD_BOUND);
            let r = check_localization_equivalence(d, b)?;
            let status = match &r {
                AtBound::Determined(eq) => Status::of_bool(eq.verdict),
                AtBound::Indeterminate { .. } => Status::Indeterminate,
            };
            Outcome { status, result: to_value(&r) }
        }
        (Op::Fibration, Entity::Functor { source, target, functor }) => {
            let (s, t) = (category(m, source), category(m, target));
            let v = is_fibration(s, t, functor)?;
            let acyclic = is_acyclic_fibration(s, t, functor)?;
            Outcome { status: Status::of(v.verdict), result: json!({ "fibration": to_value(&v), "acyclic_fibration": acyclic }) }
        }
        _ => unreachable!("op applicability is checked during validation"),
    };
    Ok(out)
}
