//! Case files: a sectioned `key = value` format.
//!
//! ```text
//! [ring]
//! field = Q
//! vars = t, x, y
//! weights = 2, 2, 1
//! relations = t^2, x^2 - t*y^2
//!
//! [ideal]
//! generators = x, y
//!
//! [gamma]
//! num_vars = 2
//! complement = T1^2
//!
//! [expect]
//! strongly_lech_independent = true
//! ```
//!
//! `#` and `;` start comments. Lists are comma separated. A key may repeat
//! only in `[expect]`, where the last value wins.

use std::collections::BTreeMap;
use std::path::Path;

use lechkit_core::field::{parse_field_name, FieldChoice};
use lechkit_core::monom::parse_exponent_list;
use lechkit_core::{Error, MonomialIdeal, Result, StandardSet};

#[derive(Clone, Debug)]
pub struct RingSection {
    pub field: FieldChoice,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct AdditivitySection {
    /// 0-based position of the generator being split.
    pub index: usize,
    pub y: String,
    pub y2: String,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_degree: u32,
    pub i_max: u32,
    pub t_max: u32,
    pub window: u32,
    pub cumulative_degree: usize,
    pub samuel_n: u32,
    pub annihilator_from: u32,
    pub annihilator_to: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree: 400,
            i_max: 4,
            t_max: 10,
            window: 30,
            cumulative_degree: 30,
            samuel_n: 8,
            annihilator_from: 1,
            annihilator_to: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseFile {
    pub name: String,
    pub description: Option<String>,
    pub ring: RingSection,
    pub generators: Vec<String>,
    pub gamma: StandardSet,
    /// Declared generator orders; checked against the computed ones.
    pub t_override: Option<Vec<u32>>,
    /// Rationals (or `inf`) for the Samuel refinement.
    pub q_override: Option<Vec<String>>,
    pub a3_shift: Option<u32>,
    pub additivity: Option<AdditivitySection>,
    pub options: Options,
    pub expect: BTreeMap<String, String>,
}

struct Entry {
    line: usize,
    value: String,
}

type Sections = BTreeMap<String, BTreeMap<String, Entry>>;

const KNOWN: &[(&str, &[&str])] = &[
    ("case", &["name", "description"]),
    ("ring", &["field", "vars", "weights", "relations"]),
    ("ideal", &["generators"]),
    ("gamma", &["num_vars", "complement"]),
    ("orders", &["t", "q", "a3_shift"]),
    ("additivity", &["index", "y", "y2"]),
    (
        "options",
        &[
            "max_degree",
            "i_max",
            "t_max",
            "window",
            "cumulative_degree",
            "samuel_n",
            "annihilator_from",
            "annihilator_to",
            "field",
        ],
    ),
    ("expect", &[]),
];

fn split_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(Error::parse(line, indent + trimmed.len() + 1, "expected `]`"));
            };
            let name = name.trim().to_ascii_lowercase();
            if !KNOWN.iter().any(|(s, _)| *s == name) {
                return Err(Error::parse(line, indent + 2, format!("unknown section `{name}`")));
            }
            if out.contains_key(&name) {
                return Err(Error::parse(line, indent + 2, format!("section `{name}` repeated")));
            }
            out.insert(name.clone(), BTreeMap::new());
            current = Some(name);
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(Error::parse(line, indent + 1, "expected `key = value`"));
        };
        let Some(section) = &current else {
            return Err(Error::parse(line, indent + 1, "key outside of any section"));
        };
        let key = trimmed[..eq].trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::parse(line, indent + 1, "empty key"));
        }
        let keys = KNOWN.iter().find(|(s, _)| s == section).map(|(_, k)| *k).unwrap_or(&[]);
        if section != "expect" && !keys.contains(&key.as_str()) {
            return Err(Error::parse(line, indent + 1, format!("unknown key `{key}` in [{section}]")));
        }
        let map = out.get_mut(section).expect("section exists");
        if section != "expect" && map.contains_key(&key) {
            return Err(Error::parse(line, indent + 1, format!("key `{key}` repeated")));
        }
        map.insert(
            key,
            Entry {
                line,
                value: trimmed[eq + 1..].trim().to_string(),
            },
        );
    }
    Ok(out)
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn key_error(section: &str, key: &str, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("[{section}] {key} (line {line}): {msg}"))
}

fn get<'a>(s: &'a Sections, section: &str, key: &str) -> Option<&'a Entry> {
    s.get(section).and_then(|m| m.get(key))
}

fn require<'a>(s: &'a Sections, section: &str, key: &str) -> Result<&'a Entry> {
    get(s, section, key).ok_or_else(|| Error::Input(format!("missing [{section}] {key}")))
}

fn number<T: std::str::FromStr>(s: &Sections, section: &str, key: &str) -> Result<Option<T>> {
    match get(s, section, key) {
        None => Ok(None),
        Some(e) => e
            .value
            .parse()
            .map(Some)
            .map_err(|_| key_error(section, key, e.line, format!("`{}` is not a valid number", e.value))),
    }
}

fn u32_list(section: &str, key: &str, e: &Entry) -> Result<Vec<u32>> {
    list(&e.value)
        .iter()
        .map(|w| w.parse::<u32>().map_err(|_| key_error(section, key, e.line, format!("`{w}` is not a non-negative integer"))))
        .collect()
}

impl CaseFile {
    pub fn from_path(path: &Path) -> Result<CaseFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "case".into());
        CaseFile::parse(&text, &stem)
    }

    /// Parses and validates a case; `default_name` is used when the file has
    /// no `[case] name`.
    pub fn parse(text: &str, default_name: &str) -> Result<CaseFile> {
        let s = split_sections(text)?;
        let name = get(&s, "case", "name").map_or(default_name.to_string(), |e| e.value.clone());
        let description = get(&s, "case", "description").map(|e| e.value.clone());

        let field_entry = get(&s, "options", "field").or_else(|| get(&s, "ring", "field"));
        let field = match field_entry {
            None => FieldChoice::Rationals,
            Some(e) => parse_field_name(&e.value).map_err(|err| key_error("ring", "field", e.line, err))?,
        };
        let vars_entry = require(&s, "ring", "vars")?;
        let vars = list(&vars_entry.value);
        if vars.is_empty() {
            return Err(key_error("ring", "vars", vars_entry.line, "no variables"));
        }
        for (i, v) in vars.iter().enumerate() {
            if !v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                || !v.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                return Err(key_error("ring", "vars", vars_entry.line, format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(key_error("ring", "vars", vars_entry.line, format!("variable `{v}` repeated")));
            }
        }
        let weights = match get(&s, "ring", "weights") {
            None => vec![1; vars.len()],
            Some(e) => {
                let w = u32_list("ring", "weights", e)?;
                if w.len() != vars.len() {
                    return Err(key_error(
                        "ring",
                        "weights",
                        e.line,
                        format!("{} weights for {} variables", w.len(), vars.len()),
                    ));
                }
                if w.contains(&0) {
                    return Err(key_error("ring", "weights", e.line, "weights must be positive"));
                }
                w
            }
        };
        let relations = get(&s, "ring", "relations").map_or(Vec::new(), |e| list(&e.value));

        let gens_entry = require(&s, "ideal", "generators")?;
        let generators = list(&gens_entry.value);
        if generators.is_empty() {
            return Err(key_error("ideal", "generators", gens_entry.line, "no generators"));
        }

        let gamma_vars: usize = number(&s, "gamma", "num_vars")?.unwrap_or(0);
        if gamma_vars != generators.len() {
            return Err(Error::Input(format!(
                "gamma num_vars mismatch: [gamma] has {gamma_vars} variables, the ideal has {} generators",
                generators.len()
            )));
        }
        let complement = match get(&s, "gamma", "complement") {
            None => MonomialIdeal::zero(gamma_vars),
            Some(e) => MonomialIdeal::parse(&e.value, gamma_vars)
                .map_err(|err| key_error("gamma", "complement", e.line, err))?,
        };
        let gamma = StandardSet::complement_of(complement);

        let t_override = get(&s, "orders", "t").map(|e| u32_list("orders", "t", e)).transpose()?;
        if let Some(t) = &t_override {
            if t.len() != generators.len() {
                return Err(Error::Input(format!(
                    "[orders] t has {} entries for {} generators",
                    t.len(),
                    generators.len()
                )));
            }
        }
        let q_override = get(&s, "orders", "q").map(|e| list(&e.value));
        if let Some(q) = &q_override {
            if q.len() != generators.len() {
                return Err(Error::Input(format!(
                    "[orders] q has {} entries for {} generators",
                    q.len(),
                    generators.len()
                )));
            }
        }
        let a3_shift = number(&s, "orders", "a3_shift")?;

        let additivity = if s.contains_key("additivity") {
            let index: usize = number(&s, "additivity", "index")?
                .ok_or_else(|| Error::Input("missing [additivity] index".into()))?;
            if index == 0 || index > generators.len() {
                return Err(Error::Input(format!(
                    "[additivity] index {index} out of range 1..={}",
                    generators.len()
                )));
            }
            Some(AdditivitySection {
                index: index - 1,
                y: require(&s, "additivity", "y")?.value.clone(),
                y2: require(&s, "additivity", "y2")?.value.clone(),
            })
        } else {
            None
        };

        let mut options = Options::default();
        macro_rules! opt {
            ($key:ident) => {
                if let Some(v) = number(&s, "options", stringify!($key))? {
                    options.$key = v;
                }
            };
        }
        opt!(max_degree);
        opt!(i_max);
        opt!(t_max);
        opt!(window);
        opt!(cumulative_degree);
        opt!(samuel_n);
        opt!(annihilator_from);
        opt!(annihilator_to);
        if options.window < 2 {
            return Err(Error::Input("[options] window must be at least 2".into()));
        }

        let expect = s
            .get("expect")
            .map(|m| m.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect())
            .unwrap_or_default();

        Ok(CaseFile {
            name,
            description,
            ring: RingSection {
                field,
                vars,
                weights,
                relations,
            },
            generators,
            gamma,
            t_override,
            q_override,
            a3_shift,
            additivity,
            options,
            expect,
        })
    }
}

/// Parses an `a`-vector for the `filtration` subcommand.
pub fn parse_box(text: &str) -> Result<Vec<u32>> {
    parse_exponent_list(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "
[ring]
vars = t, x, y
weights = 2, 2, 1
relations = t^2, x^2 - t*y^2

[ideal]
generators = x, y

[gamma]
num_vars = 2
complement = T1^2

[expect]
e_n = 4
";

    #[test]
    fn parses_a_full_case() {
        let c = CaseFile::parse(GOOD, "demo").unwrap();
        assert_eq!(c.name, "demo");
        assert_eq!(c.ring.vars, vec!["t", "x", "y"]);
        assert_eq!(c.ring.weights, vec![2, 2, 1]);
        assert_eq!(c.ring.relations.len(), 2);
        assert_eq!(c.generators, vec!["x", "y"]);
        assert_eq!(c.gamma.ideal().generators().len(), 1);
        assert_eq!(c.expect.get("e_n").map(String::as_str), Some("4"));
    }

    #[test]
    fn empty_gamma_is_a_mismatch() {
        let text = "[ring]\nvars = x, y\n[ideal]\ngenerators = x, y\n[gamma]\n";
        let err = CaseFile::parse(text, "c").unwrap_err().to_string();
        assert!(err.contains("gamma num_vars mismatch"), "{err}");
    }

    #[test]
    fn errors_carry_positions() {
        match CaseFile::parse("[ring]\nvars x\n", "c") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 1)),
            other => panic!("{other:?}"),
        }
        assert!(CaseFile::parse("[rings]\n", "c").is_err());
        assert!(CaseFile::parse("[ring]\nbogus = 1\n", "c").is_err());
        let bad_weights = GOOD.replace("weights = 2, 2, 1", "weights = 2, 0, 1");
        assert!(CaseFile::parse(&bad_weights, "c").unwrap_err().to_string().contains("weights"));
    }
}
