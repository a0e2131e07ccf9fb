//! File-backed repository of advertised resources.
//!
//! One record per line, LF terminated:
//!
//! ```text
//! <id>\t<prop>=<value>;<prop>=<value>;...
//! ```
//!
//! An empty value is `Null`. Value types come from the taxonomy's property
//! definitions. In ids and text values the characters `%`, `;`, `=`, tab, CR
//! and LF are written as `%25`, `%3B`, `%3D`, `%09`, `%0D` and `%0A`.
//!
//! Every mutation rewrites the whole file under an exclusive advisory lock;
//! loads take a shared lock. A [`Repository`] value is an immutable snapshot
//! and mutations return the newly committed snapshot.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::ontology::Taxonomy;
use crate::table::{AttributeId, InformationTable, ObjectId};
use crate::value::{AttributeValue, ValueType};

/// One advertised resource: an id plus property values in advertised order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceRecord {
    id: ObjectId,
    values: IndexMap<String, AttributeValue>,
}

impl ResourceRecord {
    /// Later duplicates of a property name overwrite earlier ones. An empty
    /// text value is an unknown value and is stored as `Null`.
    pub fn new<N: Into<String>>(id: impl Into<String>, values: Vec<(N, AttributeValue)>) -> Result<Self> {
        let mut map = IndexMap::with_capacity(values.len());
        for (name, value) in values {
            let value = match value {
                AttributeValue::Text(s) if s.is_empty() => AttributeValue::Null,
                AttributeValue::Real(r) => AttributeValue::real(r)?,
                v => v,
            };
            map.insert(name.into(), value);
        }
        Ok(ResourceRecord {
            id: ObjectId::new(id)?,
            values: map,
        })
    }

    pub fn id(&self) -> &ObjectId {
        &self.id
    }

    pub fn values(&self) -> &IndexMap<String, AttributeValue> {
        &self.values
    }

    pub fn get(&self, property: &str) -> Option<&AttributeValue> {
        self.values.get(property)
    }

    /// Every property bound in `tax` and every value of the declared type.
    pub fn validate(&self, tax: &Taxonomy) -> Result<()> {
        for (name, value) in &self.values {
            let def = tax.property_def(tax.property(name)?);
            if let Some(t) = value.value_type() {
                if t != def.value_type {
                    return Err(Error::TypeMismatch {
                        name: name.clone(),
                        expected: def.value_type.to_string(),
                        found: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn to_line(&self) -> String {
        let fields: Vec<String> = self
            .values
            .iter()
            .map(|(name, value)| {
                let rendered = match value {
                    AttributeValue::Text(s) => escape(s),
                    other => other.to_string(),
                };
                format!("{}={}", escape(name), rendered)
            })
            .collect();
        format!("{}\t{}", escape(self.id.as_str()), fields.join(";"))
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            ';' => out.push_str("%3B"),
            '=' => out.push_str("%3D"),
            '\t' => out.push_str("%09"),
            '\r' => out.push_str("%0D"),
            '\n' => out.push_str("%0A"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('%') {
        out.push_str(&rest[..pos]);
        let code = rest
            .get(pos + 1..pos + 3)
            .ok_or_else(|| format!("truncated escape in `{s}`"))?;
        out.push(match code {
            "25" => '%',
            "3B" => ';',
            "3D" => '=',
            "09" => '\t',
            "0D" => '\r',
            "0A" => '\n',
            other => return Err(format!("unknown escape `%{other}` in `{s}`")),
        });
        rest = &rest[pos + 3..];
    }
    out.push_str(rest);
    Ok(out)
}

fn parse_line(tax: &Taxonomy, line: &str) -> std::result::Result<ResourceRecord, String> {
    let (id, fields) = line
        .split_once('\t')
        .ok_or_else(|| "expected `<id>\\t<properties>`".to_owned())?;
    let id = unescape(id)?;
    if id.is_empty() {
        return Err("empty resource id".to_owned());
    }
    let mut values = Vec::new();
    if !fields.is_empty() {
        for field in fields.split(';') {
            let (name, raw) = field
                .split_once('=')
                .ok_or_else(|| format!("expected `<property>=<value>`, got `{field}`"))?;
            let name = unescape(name)?;
            let def = tax
                .property(&name)
                .map(|id| tax.property_def(id))
                .map_err(|e| e.to_string())?;
            let value = match def.value_type {
                ValueType::Text => def.value_type.parse_value(&unescape(raw)?)?,
                t => t.parse_value(raw)?,
            };
            if values.iter().any(|(n, _): &(String, AttributeValue)| *n == name) {
                return Err(format!("property `{name}` given twice"));
            }
            values.push((name, value));
        }
    }
    ResourceRecord::new(id, values).map_err(|e| e.to_string())
}

/// Snapshot of the advertised resource repository.
#[derive(Debug, Clone, PartialEq)]
pub struct Repository {
    path: Option<PathBuf>,
    records: Vec<ResourceRecord>,
}

impl Repository {
    /// A repository with no backing file; mutations only produce new snapshots.
    pub fn in_memory(records: Vec<ResourceRecord>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for r in &records {
            if !seen.insert(r.id.clone()) {
                return Err(Error::DuplicateResource(r.id.to_string()));
            }
        }
        Ok(Repository { path: None, records })
    }

    /// Loads `path`; a missing file is an I/O error.
    pub fn load(path: impl AsRef<Path>, tax: &Taxonomy) -> Result<Self> {
        let path = path.as_ref();
        let mut file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        file.lock_shared()
            .map_err(|e| Error::io(format!("locking {}", path.display()), e))?;
        let records = read_records(&mut file, path, tax)?;
        Ok(Repository {
            path: Some(path.to_owned()),
            records,
        })
    }

    /// Loads `path`, creating an empty repository file if it does not exist.
    pub fn open_or_create(path: impl AsRef<Path>, tax: &Taxonomy) -> Result<Self> {
        let path = path.as_ref();
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
        Repository::load(path, tax)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[ResourceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ResourceRecord> {
        self.records.iter().find(|r| r.id.as_str() == id)
    }

    /// The same records backed by `path` (not yet written).
    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.path = Some(path.into());
        self
    }

    /// Writes the snapshot to its backing file, replacing the contents.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut file = open_for_update(path)?;
        write_records(&mut file, path, &self.records)
    }

    /// Validates and appends `record`. With a backing file the check and the
    /// write happen against the file's current contents under one lock.
    pub fn register(&self, tax: &Taxonomy, record: ResourceRecord) -> Result<Repository> {
        record.validate(tax)?;
        self.mutate(tax, |records| {
            if records.iter().any(|r| r.id == record.id) {
                return Err(Error::DuplicateResource(record.id.to_string()));
            }
            records.push(record);
            Ok(())
        })
    }

    pub fn deregister(&self, tax: &Taxonomy, id: &str) -> Result<Repository> {
        self.mutate(tax, |records| {
            let pos = records
                .iter()
                .position(|r| r.id.as_str() == id)
                .ok_or_else(|| Error::UnknownResource(id.to_owned()))?;
            records.remove(pos);
            Ok(())
        })
    }

    fn mutate(
        &self,
        tax: &Taxonomy,
        change: impl FnOnce(&mut Vec<ResourceRecord>) -> Result<()>,
    ) -> Result<Repository> {
        match &self.path {
            None => {
                let mut records = self.records.clone();
                change(&mut records)?;
                Ok(Repository { path: None, records })
            }
            Some(path) => {
                let mut file = open_for_update(path)?;
                let mut records = read_records(&mut file, path, tax)?;
                change(&mut records)?;
                write_records(&mut file, path, &records)?;
                Ok(Repository {
                    path: Some(path.clone()),
                    records,
                })
            }
        }
    }

    /// Objects are record ids in order, attributes are `properties`; a record
    /// without a value for a property gets `Null` there.
    pub fn to_information_table<S: AsRef<str>>(&self, properties: &[S]) -> Result<InformationTable> {
        let attrs = properties
            .iter()
            .map(|p| AttributeId::new(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut builder = InformationTable::builder(attrs)?;
        for r in &self.records {
            let row = properties
                .iter()
                .map(|p| r.values.get(p.as_ref()).cloned().unwrap_or(AttributeValue::Null))
                .collect();
            builder.row(r.id.clone(), row)?;
        }
        Ok(builder.build())
    }
}

fn open_for_update(path: &Path) -> Result<File> {
    let file = OpenOptions::new()
        .read(true)
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    file.lock()
        .map_err(|e| Error::io(format!("locking {}", path.display()), e))?;
    Ok(file)
}

fn read_records(file: &mut File, path: &Path, tax: &Taxonomy) -> Result<Vec<ResourceRecord>> {
    let mut text = String::new();
    file.read_to_string(&mut text)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut records: Vec<ResourceRecord> = Vec::new();
    for (i, line) in text.split_terminator('\n').enumerate() {
        let err = |message: String| Error::RecordSyntax {
            path: path.to_owned(),
            line: i + 1,
            message,
        };
        if line.is_empty() {
            continue;
        }
        let record = parse_line(tax, line).map_err(err)?;
        record.validate(tax).map_err(|e| err(e.to_string()))?;
        if records.iter().any(|r| r.id == record.id) {
            return Err(err(format!("duplicate resource `{}`", record.id)));
        }
        records.push(record);
    }
    Ok(records)
}

fn write_records(file: &mut File, path: &Path, records: &[ResourceRecord]) -> Result<()> {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    let io = |e| Error::io(format!("writing {}", path.display()), e);
    file.seek(SeekFrom::Start(0)).map_err(io)?;
    file.set_len(0).map_err(io)?;
    file.write_all(out.as_bytes()).map_err(io)?;
    file.sync_data().map_err(io)
}
