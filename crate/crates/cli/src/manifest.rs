//! Manifest documents: raw JSON shape, parse diagnostics and validation
//! into core objects.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rectify_core::ainf::{AInfCategory, AInfFunctor, AInfLike};
use rectify_core::catalog;
use rectify_core::corpus::{random_dg_category, seed_from_env, CorpusParams};
use rectify_core::exactlin::{FieldSpec, Scalar};
use rectify_core::relcat::{examples, AdjunctionData, FiniteCategory, FiniteRelativeCategory, RelativeFunctor};
use serde::Deserialize;

use crate::error::CliError;
use crate::ops::Op;

pub const FORMAT: &str = "rectify-kit/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawManifest {
    pub format: String,
    #[serde(default)]
    pub field: Option<FieldText>,
    #[serde(default)]
    pub entities: Vec<RawEntity>,
    #[serde(default)]
    pub tasks: Vec<RawTask>,
}

/// `"Q"`, `"F5"`, `"F_5"`, `"GF(5)"`, or the characteristic as an integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldText {
    Characteristic(u64),
    Name(String),
}

impl FieldText {
    pub fn resolve(&self) -> Result<FieldSpec, String> {
        let p = match self {
            FieldText::Characteristic(p) => *p,
            FieldText::Name(s) => parse_field_name(s)?,
        };
        FieldSpec::new(p).map_err(|e| e.to_string())
    }
}

fn parse_field_name(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if matches!(t, "Q" | "QQ" | "0") {
        return Ok(0);
    }
    let digits = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("F_"))
        .or_else(|| t.strip_prefix('F'))
        .unwrap_or(t);
    digits.parse().map_err(|_| format!("unrecognized field {s:?}; use Q or F<p>"))
}

/// A coefficient: an integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn resolve(&self, field: FieldSpec) -> Result<Scalar, String> {
        match self {
            ScalarText::Int(n) => Ok(field.from_i64(*n)),
            ScalarText::Text(t) => field.parse(t).map_err(|e| e.to_string()),
        }
    }
}

type LinearText = Vec<(String, ScalarText)>;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RawEntity {
    Category(RawCategory),
    Functor(RawFunctor),
    RelativeCategory(RawRelativeCategory),
    RelativeFunctor(RawRelativeFunctor),
    Adjunction(RawAdjunction),
}

impl RawEntity {
    pub fn name(&self) -> &str {
        match self {
            RawEntity::Category(e) => &e.name,
            RawEntity::Functor(e) => &e.name,
            RawEntity::RelativeCategory(e) => &e.name,
            RawEntity::RelativeFunctor(e) => &e.name,
            RawEntity::Adjunction(e) => &e.name,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub name: String,
    /// A fixture from the built-in catalog.
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub random: Option<RawRandom>,
    #[serde(default)]
    pub objects: Vec<String>,
    /// `(name, source, target, degree)`.
    #[serde(default)]
    pub morphisms: Vec<(String, String, String, i32)>,
    /// `(inputs in composition order, output)`.
    #[serde(default)]
    pub operations: Vec<(Vec<String>, LinearText)>,
    #[serde(default)]
    pub arity_bound: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRandom {
    /// Falls back to `RECTIFY_KIT_SEED`.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_objects: Option<usize>,
    #[serde(default)]
    pub max_hom_dim: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunctor {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub identity: bool,
    #[serde(default)]
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub components: Vec<(Vec<String>, LinearText)>,
    #[serde(default)]
    pub arity_bound: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRelativeCategory {
    pub name: String,
    /// `walking_arrow`, `parallel_pair`, `terminal` or `walking_isomorphism`.
    #[serde(default)]
    pub example: Option<String>,
    #[serde(default)]
    pub objects: Vec<String>,
    /// `(name, source, target)`; identities are implicit as `id_X`.
    #[serde(default)]
    pub morphisms: Vec<(String, String, String)>,
    /// `(g, f, g∘f)` for every composable pair of non-identities.
    #[serde(default)]
    pub compositions: Vec<(String, String, String)>,
    #[serde(default)]
    pub weak_equivalences: Option<WeqText>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum WeqText {
    /// `identities`, `isomorphisms` or `all`.
    Preset(String),
    Names(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRelativeFunctor {
    pub name: String,
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAdjunction {
    pub name: String,
    pub left: String,
    pub right: String,
    /// Object of the left functor's source ↦ morphism `X → RL(X)`.
    pub unit: BTreeMap<String, String>,
    /// Object of the left functor's target ↦ morphism `LR(Y) → Y`.
    pub counit: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTask {
    #[serde(default)]
    pub name: Option<String>,
    pub op: String,
    pub entity: String,
    #[serde(default)]
    pub arity_bound: Option<usize>,
    #[serde(default)]
    pub length_bound: Option<usize>,
    #[serde(default)]
    pub word_bound: Option<usize>,
    #[serde(default)]
    pub degree_window: Option<WindowText>,
}

/// `"LO:HI"` or `[LO, HI]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WindowText {
    Pair(i32, i32),
    Text(String),
}

impl WindowText {
    pub fn resolve(&self) -> Result<(i32, i32), String> {
        let (lo, hi) = match self {
            WindowText::Pair(lo, hi) => (*lo, *hi),
            WindowText::Text(t) => parse_window(t)?,
        };
        if lo > hi {
            return Err(format!("empty degree window {lo}:{hi}"));
        }
        Ok((lo, hi))
    }
}

pub fn parse_window(t: &str) -> Result<(i32, i32), String> {
    let bad = || format!("degree window {t:?} is not of the form LO:HI");
    let (lo, hi) = t.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

/// Parses JSON text, reporting syntax and shape errors at a line and column
/// together with the token found there.
pub fn parse(path: &str, text: &str) -> Result<RawManifest, CliError> {
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        CliError::Parse { path: path.to_string(), line, column, token: token_at(text, line, column), message: strip_position(&e) }
    })?;
    if raw.format != FORMAT {
        return Err(CliError::Semantic { entity: "format".into(), message: format!("expected {FORMAT:?}, found {:?}", raw.format) });
    }
    Ok(raw)
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

/// The token starting at (or, past the end of a line, just before) the
/// given 1-based position.
fn token_at(text: &str, line: usize, column: usize) -> String {
    let Some(l) = text.lines().nth(line.saturating_sub(1)) else { return "<end of input>".into() };
    let chars: Vec<char> = l.chars().collect();
    if chars.is_empty() {
        return "<end of line>".into();
    }
    let mut i = column.saturating_sub(1).min(chars.len() - 1);
    let structural = |c: char| c.is_whitespace() || "{}[],:".contains(c);
    if structural(chars[i]) && !chars[i].is_whitespace() {
        return chars[i].to_string();
    }
    while i > 0 && !structural(chars[i - 1]) {
        i -= 1;
    }
    let token: String = chars[i..].iter().take_while(|&&c| !structural(c)).collect();
    if token.is_empty() {
        "<whitespace>".into()
    } else {
        token
    }
}

/// A validated entity.
#[derive(Debug, Clone)]
pub enum Entity {
    Category(AInfCategory),
    Functor { source: String, target: String, functor: AInfFunctor },
    RelativeCategory(FiniteRelativeCategory),
    RelativeFunctor(RelativeFunctor),
    Adjunction(AdjunctionData),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Category(_) => "category",
            Entity::Functor { .. } => "functor",
            Entity::RelativeCategory(_) => "relative_category",
            Entity::RelativeFunctor(_) => "relative_functor",
            Entity::Adjunction(_) => "adjunction",
        }
    }
}

/// Per-task bounds; unset values fall back to command-line flags, then to
/// defaults.
#[derive(Debug, Clone, Default)]
pub struct TaskParams {
    pub arity_bound: Option<usize>,
    pub length_bound: Option<usize>,
    pub word_bound: Option<usize>,
    pub degree_window: Option<(i32, i32)>,
}

#[derive(Debug, Clone)]
pub struct Task {
    pub name: String,
    pub op: Op,
    pub entity: String,
    pub params: TaskParams,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub field: FieldSpec,
    pub entities: BTreeMap<String, Entity>,
    pub tasks: Vec<Task>,
}

fn semantic(entity: &str, message: impl ToString) -> CliError {
    CliError::Semantic { entity: entity.to_string(), message: message.to_string() }
}

impl RawManifest {
    /// Resolves every entity in dependency order and checks every task.
    /// `field_override` replaces the manifest's field.
    pub fn validate(self, field_override: Option<FieldSpec>) -> Result<Manifest, CliError> {
        let field = match (field_override, &self.field) {
            (Some(f), _) => f,
            (None, Some(t)) => t.resolve().map_err(|m| semantic("field", m))?,
            (None, None) => return Err(semantic("field", "no field given in the manifest or by --field")),
        };
        let mut seen = BTreeSet::new();
        for e in &self.entities {
            if !seen.insert(e.name().to_string()) {
                return Err(semantic(e.name(), "duplicate entity name"));
            }
        }
        let mut entities = BTreeMap::new();
        // Kinds only reference kinds resolved before them.
        for pass in 0..5 {
            for e in &self.entities {
                let built = match (pass, e) {
                    (0, RawEntity::Category(c)) => Entity::Category(build_category(c, field)?),
                    (1, RawEntity::Functor(f)) => build_functor(f, &entities)?,
                    (2, RawEntity::RelativeCategory(r)) => Entity::RelativeCategory(build_relative(r)?),
                    (3, RawEntity::RelativeFunctor(f)) => Entity::RelativeFunctor(build_relative_functor(f, &entities)?),
                    (4, RawEntity::Adjunction(a)) => Entity::Adjunction(build_adjunction(a, &entities)?),
                    _ => continue,
                };
                entities.insert(e.name().to_string(), built);
            }
        }
        let mut tasks = Vec::with_capacity(self.tasks.len());
        let mut task_names = BTreeSet::new();
        for (i, t) in self.tasks.iter().enumerate() {
            let task = build_task(i, t, &entities)?;
            if !task_names.insert(task.name.clone()) {
                return Err(semantic(&task.name, "duplicate task name"));
            }
            tasks.push(task);
        }
        Ok(Manifest { field, entities, tasks })
    }
}

fn build_task(index: usize, t: &RawTask, entities: &BTreeMap<String, Entity>) -> Result<Task, CliError> {
    let name = t.name.clone().unwrap_or_else(|| format!("{index:03}-{}", t.op));
    let op = Op::parse(&t.op).ok_or_else(|| semantic(&name, format!("unknown op {:?}", t.op)))?;
    let entity = entities.get(&t.entity).ok_or_else(|| semantic(&name, format!("unknown entity {:?}", t.entity)))?;
    if !op.accepts(entity) {
        return Err(semantic(&name, format!("op {} does not apply to {} {:?}", op.name(), entity.kind(), t.entity)));
    }
    let degree_window = t.degree_window.as_ref().map(WindowText::resolve).transpose().map_err(|m| semantic(&name, m))?;
    let params = TaskParams { arity_bound: t.arity_bound, length_bound: t.length_bound, word_bound: t.word_bound, degree_window };
    Ok(Task { name, op, entity: t.entity.clone(), params })
}

fn linear(field: FieldSpec, owner: &str, terms: &LinearText) -> Result<Vec<(String, Scalar)>, CliError> {
    terms.iter().map(|(g, c)| Ok((g.clone(), c.resolve(field).map_err(|m| semantic(owner, m))?))).collect()
}

fn build_category(c: &RawCategory, field: FieldSpec) -> Result<AInfCategory, CliError> {
    let explicit = !c.objects.is_empty() || !c.morphisms.is_empty() || !c.operations.is_empty();
    let cat = match (&c.catalog, &c.random, explicit) {
        (Some(name), None, false) => catalog::by_name(name, field)
            .ok_or_else(|| semantic(&c.name, format!("unknown catalog entry {name:?}; known: {}", catalog::NAMES.join(", "))))?,
        (None, Some(r), false) => {
            let mut params = CorpusParams::default();
            params.max_objects = r.max_objects.unwrap_or(params.max_objects);
            params.max_hom_dim = r.max_hom_dim.unwrap_or(params.max_hom_dim);
            let mut rng = ChaCha8Rng::seed_from_u64(r.seed.unwrap_or_else(seed_from_env));
            random_dg_category(field, &mut rng, &params)
        }
        (None, None, true) => {
            let mut b = AInfCategory::builder(field);
            for o in &c.objects {
                b = b.object(o);
            }
            for (name, s, t, d) in &c.morphisms {
                b = b.morphism(name, s, t, *d);
            }
            for (inputs, output) in &c.operations {
                let out = linear(field, &c.name, output)?;
                let ins: Vec<&str> = inputs.iter().map(String::as_str).collect();
                let out: Vec<(&str, Scalar)> = out.iter().map(|(g, s)| (g.as_str(), s.clone())).collect();
                b = b.op(&ins, &out);
            }
            if let Some(n) = c.arity_bound {
                b = b.arity_bound(n);
            }
            return b.build().map_err(|e| semantic(&c.name, e));
        }
        _ => return Err(semantic(&c.name, "give exactly one of `catalog`, `random`, or explicit objects/morphisms/operations")),
    };
    match c.arity_bound {
        Some(n) => cat.with_arity_bound(n).map_err(|e| semantic(&c.name, e)),
        None => Ok(cat),
    }
}

fn category<'a>(entities: &'a BTreeMap<String, Entity>, owner: &str, name: &str) -> Result<&'a AInfCategory, CliError> {
    match entities.get(name) {
        Some(Entity::Category(c)) => Ok(c),
        _ => Err(semantic(owner, format!("{name:?} is not a declared category"))),
    }
}

fn build_functor(f: &RawFunctor, entities: &BTreeMap<String, Entity>) -> Result<Entity, CliError> {
    let source = category(entities, &f.name, &f.source)?;
    let target = category(entities, &f.name, &f.target)?;
    let functor = if f.identity {
        if f.source != f.target || !f.objects.is_empty() || !f.components.is_empty() {
            return Err(semantic(&f.name, "an identity functor takes no objects or components and needs source = target"));
        }
        AInfFunctor::identity(source)
    } else {
        let mut b = AInfFunctor::builder(source, target);
        for (x, y) in &f.objects {
            b = b.object(x, y);
        }
        for (inputs, output) in &f.components {
            let out = linear(source.field(), &f.name, output)?;
            let ins: Vec<&str> = inputs.iter().map(String::as_str).collect();
            let out: Vec<(&str, Scalar)> = out.iter().map(|(g, s)| (g.as_str(), s.clone())).collect();
            b = b.component(&ins, &out);
        }
        if let Some(n) = f.arity_bound {
            b = b.arity_bound(n);
        }
        b.build().map_err(|e| semantic(&f.name, e))?
    };
    Ok(Entity::Functor { source: f.source.clone(), target: f.target.clone(), functor })
}

fn build_relative(r: &RawRelativeCategory) -> Result<FiniteRelativeCategory, CliError> {
    let explicit = !r.objects.is_empty() || !r.morphisms.is_empty() || !r.compositions.is_empty();
    let cat: FiniteCategory = match (&r.example, explicit) {
        (Some(name), false) => match name.as_str() {
            "walking_arrow" => examples::walking_arrow(),
            "parallel_pair" => examples::parallel_pair(),
            "terminal" => examples::terminal(),
            "walking_isomorphism" => examples::walking_isomorphism(),
            _ => return Err(semantic(&r.name, format!("unknown example {name:?}"))),
        },
        (None, true) => {
            let mut b = FiniteCategory::builder();
            for o in &r.objects {
                b = b.object(o);
            }
            for (m, s, t) in &r.morphisms {
                b = b.morphism(m, s, t);
            }
            for (g, f, h) in &r.compositions {
                b = b.compose(g, f, h);
            }
            b.build().map_err(|e| semantic(&r.name, e))?
        }
        _ => return Err(semantic(&r.name, "give exactly one of `example` or explicit objects/morphisms/compositions")),
    };
    match &r.weak_equivalences {
        None => Ok(FiniteRelativeCategory::minimal(cat)),
        Some(WeqText::Preset(p)) => match p.as_str() {
            "identities" => Ok(FiniteRelativeCategory::minimal(cat)),
            "isomorphisms" => Ok(FiniteRelativeCategory::isomorphisms(cat)),
            "all" => Ok(FiniteRelativeCategory::maximal(cat)),
            _ => Err(semantic(&r.name, format!("unknown weak-equivalence preset {p:?}"))),
        },
        Some(WeqText::Names(names)) => {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            FiniteRelativeCategory::with_names(cat, &names).map_err(|e| semantic(&r.name, e))
        }
    }
}

fn relative<'a>(entities: &'a BTreeMap<String, Entity>, owner: &str, name: &str) -> Result<&'a FiniteRelativeCategory, CliError> {
    match entities.get(name) {
        Some(Entity::RelativeCategory(c)) => Ok(c),
        _ => Err(semantic(owner, format!("{name:?} is not a declared relative category"))),
    }
}

fn build_relative_functor(f: &RawRelativeFunctor, entities: &BTreeMap<String, Entity>) -> Result<RelativeFunctor, CliError> {
    let source = relative(entities, &f.name, &f.source)?;
    let target = relative(entities, &f.name, &f.target)?;
    let objects: Vec<(&str, &str)> = f.objects.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let morphisms: Vec<(&str, &str)> = f.morphisms.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    RelativeFunctor::from_names(source, target, &objects, &morphisms).map_err(|e| semantic(&f.name, e))
}

fn build_adjunction(a: &RawAdjunction, entities: &BTreeMap<String, Entity>) -> Result<AdjunctionData, CliError> {
    let functor = |name: &str| match entities.get(name) {
        Some(Entity::RelativeFunctor(f)) => Ok(f.clone()),
        _ => Err(semantic(&a.name, format!("{name:?} is not a declared relative functor"))),
    };
    let (left, right) = (functor(&a.left)?, functor(&a.right)?);
    let components = |cat: &FiniteCategory, map: &BTreeMap<String, String>, what: &str| -> Result<Vec<usize>, CliError> {
        cat.objects()
            .iter()
            .map(|o| {
                let m = map.get(o).ok_or_else(|| semantic(&a.name, format!("{what} has no component at {o}")))?;
                cat.morphism_id(m).ok_or_else(|| semantic(&a.name, format!("{what} component {m:?} is not a morphism")))
            })
            .collect()
    };
    let unit = components(left.source.cat(), &a.unit, "unit")?;
    let counit = components(left.target.cat(), &a.counit, "counit")?;
    let d = AdjunctionData { left, right, unit, counit };
    d.validate().map_err(|e| semantic(&a.name, e))?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let text = "{\n  \"format\": \"rectify-kit/1\",\n  \"field\": Q\n}";
        assert_eq!(token_at(text, 3, 12), "Q");
        assert_eq!(token_at(text, 2, 3), "\"format\"");
        assert_eq!(token_at(text, 9, 1), "<end of input>");
    }

    #[test]
    fn fields() {
        for (t, p) in [("Q", 0), ("F5", 5), ("F_7", 7), ("GF(3)", 3)] {
            assert_eq!(FieldText::Name(t.into()).resolve().unwrap().characteristic(), p);
        }
        assert!(FieldText::Name("F4".into()).resolve().is_err());
        assert!(FieldText::Name("R".into()).resolve().is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("-1:2"), Ok((-1, 2)));
        assert!(WindowText::Text("2:1".into()).resolve().is_err());
        assert!(parse_window("3").is_err());
    }
}
