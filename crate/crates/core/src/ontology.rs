//! Resource taxonomy: a rooted class tree plus typed properties bound to
//! classes. Properties are compared through the classes they are bound to.
//!
//! The document format is line oriented:
//!
//! ```text
//! # comment
//! class ComputingResource
//! class Hardware parent ComputingResource
//! property main_memory type long class Hardware
//! ```
//!
//! Exactly one class has no parent. Parents may be declared after their
//! children.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result, TaxonomyErrorKind};
use crate::value::ValueType;

/// Index of a class inside its [`Taxonomy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(usize);

/// Index of a property inside its [`Taxonomy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropertyId(usize);

impl PropertyId {
    pub fn index(self) -> usize {
        self.0
    }

    pub(crate) fn from_index(index: usize) -> Self {
        PropertyId(index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNode {
    pub name: String,
    pub parent: Option<ClassId>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub name: String,
    pub value_type: ValueType,
    pub class: ClassId,
}

/// How an advertised property relates to a requested one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchRelation {
    /// Both bound to the same class.
    Exact,
    /// The advertised class is an ancestor of the requested class, `d` levels up.
    PlugIn(usize),
    /// The requested class is an ancestor of the advertised class, `d` levels up.
    Subsume(usize),
    NoMatch,
}

impl fmt::Display for MatchRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchRelation::Exact => f.write_str("exact"),
            MatchRelation::PlugIn(d) => write!(f, "plug-in({d})"),
            MatchRelation::Subsume(d) => write!(f, "subsume({d})"),
            MatchRelation::NoMatch => f.write_str("no-match"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    classes: Vec<ClassNode>,
    class_index: HashMap<String, ClassId>,
    properties: Vec<PropertyDef>,
    property_index: HashMap<String, PropertyId>,
    root: ClassId,
}

const GRID_FIXTURE: &str = include_str!("../fixtures/grid.taxonomy");

fn syntax(line: usize, kind: TaxonomyErrorKind) -> Error {
    Error::Taxonomy { line, kind }
}

impl Taxonomy {
    /// The bundled computing-resource taxonomy used by the simulator.
    pub fn grid_fixture() -> Taxonomy {
        Taxonomy::parse(GRID_FIXTURE).expect("bundled taxonomy is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Taxonomy> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading taxonomy {}", path.display()), e))?;
        Taxonomy::parse(&text)
    }

    pub fn parse(source: &str) -> Result<Taxonomy> {
        struct PendingClass<'a> {
            name: &'a str,
            parent: Option<&'a str>,
            line: usize,
        }
        struct PendingProperty<'a> {
            name: &'a str,
            value_type: ValueType,
            class: &'a str,
            line: usize,
        }

        let mut classes: Vec<PendingClass<'_>> = Vec::new();
        let mut properties: Vec<PendingProperty<'_>> = Vec::new();
        let mut class_index = HashMap::new();
        let mut property_index = HashMap::new();
        let mut root: Option<usize> = None;

        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let words: Vec<&str> = text.split_whitespace().collect();
            match words.as_slice() {
                ["class", name] | ["class", name, "parent", _] => {
                    let parent = words.get(3).copied();
                    if class_index.insert(name.to_string(), ClassId(classes.len())).is_some() {
                        return Err(syntax(line, TaxonomyErrorKind::DuplicateClass(name.to_string())));
                    }
                    if parent.is_none() {
                        if root.is_some() {
                            return Err(syntax(line, TaxonomyErrorKind::MultipleRoots(name.to_string())));
                        }
                        root = Some(classes.len());
                    }
                    classes.push(PendingClass { name, parent, line });
                }
                ["property", name, "type", ty, "class", class] => {
                    let value_type = ty
                        .parse()
                        .map_err(|t| syntax(line, TaxonomyErrorKind::UnknownType(t)))?;
                    if property_index
                        .insert(name.to_string(), PropertyId(properties.len()))
                        .is_some()
                    {
                        return Err(syntax(line, TaxonomyErrorKind::DuplicateProperty(name.to_string())));
                    }
                    properties.push(PendingProperty {
                        name,
                        value_type,
                        class,
                        line,
                    });
                }
                _ => {
                    return Err(syntax(
                        line,
                        TaxonomyErrorKind::Syntax(format!("cannot parse `{text}`")),
                    ))
                }
            }
        }

        let mut parents = Vec::with_capacity(classes.len());
        for c in &classes {
            let parent = match c.parent {
                None => None,
                Some(p) => Some(
                    *class_index
                        .get(p)
                        .ok_or_else(|| syntax(c.line, TaxonomyErrorKind::UnknownParent(p.to_owned())))?,
                ),
            };
            parents.push(parent);
        }

        // Depths by walking up to the root; a walk longer than the class count
        // can only be a cycle.
        let mut depths: Vec<Option<usize>> = vec![None; classes.len()];
        for start in 0..classes.len() {
            let mut path = Vec::new();
            let mut cur = start;
            let base = loop {
                if let Some(d) = depths[cur] {
                    break d + 1;
                }
                if path.len() > classes.len() {
                    let c = &classes[start];
                    return Err(syntax(c.line, TaxonomyErrorKind::Cycle(c.name.to_owned())));
                }
                path.push(cur);
                match parents[cur] {
                    None => break 0,
                    Some(ClassId(p)) => cur = p,
                }
            };
            for (k, &node) in path.iter().rev().enumerate() {
                depths[node] = Some(base + k);
            }
        }

        let root = match root {
            Some(r) => ClassId(r),
            None => return Err(Error::MissingRoot),
        };

        let classes: Vec<ClassNode> = classes
            .iter()
            .zip(parents)
            .zip(depths)
            .map(|((c, parent), depth)| ClassNode {
                name: c.name.to_owned(),
                parent,
                depth: depth.expect("every class resolved"),
            })
            .collect();

        let properties = properties
            .iter()
            .map(|p| {
                let class = *class_index
                    .get(p.class)
                    .ok_or_else(|| syntax(p.line, TaxonomyErrorKind::UnknownClass(p.class.to_owned())))?;
                Ok(PropertyDef {
                    name: p.name.to_owned(),
                    value_type: p.value_type,
                    class,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Taxonomy {
            classes,
            class_index,
            properties,
            property_index,
            root,
        })
    }

    pub fn root(&self) -> &ClassNode {
        &self.classes[self.root.0]
    }

    pub fn classes(&self) -> &[ClassNode] {
        &self.classes
    }

    pub fn properties(&self) -> &[PropertyDef] {
        &self.properties
    }

    pub fn class(&self, name: &str) -> Result<ClassId> {
        self.class_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownClass(name.to_owned()))
    }

    pub fn class_node(&self, id: ClassId) -> &ClassNode {
        &self.classes[id.0]
    }

    pub fn property(&self, name: &str) -> Result<PropertyId> {
        self.property_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownProperty(name.to_owned()))
    }

    pub fn property_def(&self, id: PropertyId) -> &PropertyDef {
        &self.properties[id.0]
    }

    /// Parent edges from `descendant` up to `ancestor`; `None` when `ancestor`
    /// is not on the root path of `descendant`.
    pub fn generation_distance(&self, ancestor: &str, descendant: &str) -> Result<Option<usize>> {
        let a = self.class(ancestor)?;
        let d = self.class(descendant)?;
        Ok(self.distance(a, d))
    }

    pub(crate) fn distance(&self, ancestor: ClassId, descendant: ClassId) -> Option<usize> {
        let gap = self.classes[descendant.0]
            .depth
            .checked_sub(self.classes[ancestor.0].depth)?;
        let mut cur = descendant;
        for _ in 0..gap {
            cur = self.classes[cur.0].parent?;
        }
        (cur == ancestor).then_some(gap)
    }

    /// Relation of advertised property `advertised` to requested property `requested`.
    pub fn relation(&self, requested: &str, advertised: &str) -> Result<MatchRelation> {
        let r = self.property(requested)?;
        let a = self.property(advertised)?;
        Ok(self.relation_of(r, a))
    }

    pub(crate) fn relation_of(&self, requested: PropertyId, advertised: PropertyId) -> MatchRelation {
        let rc = self.properties[requested.0].class;
        let ac = self.properties[advertised.0].class;
        if rc == ac {
            MatchRelation::Exact
        } else if let Some(d) = self.distance(ac, rc) {
            MatchRelation::PlugIn(d)
        } else if let Some(d) = self.distance(rc, ac) {
            MatchRelation::Subsume(d)
        } else {
            MatchRelation::NoMatch
        }
    }

    /// Advertised properties related to at least one requested property, in
    /// advertised order. The rest are irrelevant and take no part in candidate
    /// optimisation or matching.
    pub fn prune_irrelevant<A: AsRef<str>, R: AsRef<str>>(
        &self,
        advertised: &[A],
        requested: &[R],
    ) -> Result<Vec<String>> {
        let requested = requested
            .iter()
            .map(|r| self.property(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut kept = Vec::new();
        for a in advertised {
            let id = self.property(a.as_ref())?;
            if requested
                .iter()
                .any(|&r| self.relation_of(r, id) != MatchRelation::NoMatch)
            {
                kept.push(a.as_ref().to_owned());
            }
        }
        Ok(kept)
    }
}
