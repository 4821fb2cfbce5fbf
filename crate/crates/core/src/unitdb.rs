//! Named units, prefixes, constants and quantity-kind aliases.
//!
//! All names live in one global namespace. Each definition carries a
//! [`Topic`] tag for documentation and corpus bookkeeping only; it never
//! scopes a lookup.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dimension::Dimension;
use crate::numeric::{NumericConfig, NumericValue};
use crate::quantity::Quantity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitDbError {
    #[error("unknown {category} `{name}`{}", suggestion_suffix(.suggestions))]
    UnknownIdentifier {
        category: &'static str,
        name: String,
        suggestions: Vec<String>,
    },
    #[error("constant `{0}` cannot be overridden")]
    NotOverridable(String),
}

fn suggestion_suffix(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", s.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topic {
    Mechanics,
    WavesAcoustics,
    Thermodynamics,
    Electromagnetism,
    Optics,
    ModernPhysics,
}

impl Topic {
    pub const ALL: [Topic; 6] = [
        Topic::Mechanics,
        Topic::WavesAcoustics,
        Topic::Thermodynamics,
        Topic::Electromagnetism,
        Topic::Optics,
        Topic::ModernPhysics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Topic::Mechanics => "mechanics",
            Topic::WavesAcoustics => "waves-acoustics",
            Topic::Thermodynamics => "thermodynamics",
            Topic::Electromagnetism => "electromagnetism",
            Topic::Optics => "optics",
            Topic::ModernPhysics => "modern-physics",
        }
    }
}

impl fmt::Display for Topic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Topic::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown topic `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitDef {
    pub name: String,
    pub dim: Dimension,
    /// Multiplier into coherent SI; exactly 1 for coherent units.
    pub scale: BigRational,
    pub topic: Topic,
    /// Defining product of base units, e.g. `kilogram meter second^-2`.
    pub decomposition: &'static str,
}

impl UnitDef {
    pub fn quantity(&self) -> Quantity {
        Quantity::new(NumericValue::exact(self.scale.clone()), self.dim)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefixDef {
    pub name: String,
    pub power_of_ten: i32,
}

impl PrefixDef {
    pub fn factor(&self) -> BigRational {
        let p = num_traits::pow(BigInt::from(10), self.power_of_ten.unsigned_abs() as usize);
        if self.power_of_ten >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstantValue {
    Exact(BigRational),
    /// π, materialized at the caller's working precision.
    Pi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantDef {
    pub name: String,
    pub value: ConstantValue,
    pub dim: Dimension,
    pub topic: Option<Topic>,
    pub provenance: &'static str,
    pub overridable: bool,
}

impl ConstantDef {
    pub fn quantity(&self, cfg: &NumericConfig) -> Quantity {
        let v = match &self.value {
            ConstantValue::Exact(r) => NumericValue::exact(r.clone()),
            ConstantValue::Pi => NumericValue::pi(cfg),
        };
        Quantity::new(v, self.dim)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KindAlias {
    pub name: String,
    pub dim: Dimension,
}

// Storage order: T L M I Θ N J
type Exps = [i64; 7];

const KINDS: &[(&str, Exps)] = &[
    ("Dimensionless", [0, 0, 0, 0, 0, 0, 0]),
    ("Time", [1, 0, 0, 0, 0, 0, 0]),
    ("Length", [0, 1, 0, 0, 0, 0, 0]),
    ("Mass", [0, 0, 1, 0, 0, 0, 0]),
    ("Current", [0, 0, 0, 1, 0, 0, 0]),
    ("Temperature", [0, 0, 0, 0, 1, 0, 0]),
    ("Amount", [0, 0, 0, 0, 0, 1, 0]),
    ("LuminousIntensity", [0, 0, 0, 0, 0, 0, 1]),
    ("Area", [0, 2, 0, 0, 0, 0, 0]),
    ("Volume", [0, 3, 0, 0, 0, 0, 0]),
    ("Speed", [-1, 1, 0, 0, 0, 0, 0]),
    ("Velocity", [-1, 1, 0, 0, 0, 0, 0]),
    ("Acceleration", [-2, 1, 0, 0, 0, 0, 0]),
    ("Frequency", [-1, 0, 0, 0, 0, 0, 0]),
    ("AngularVelocity", [-1, 0, 0, 0, 0, 0, 0]),
    ("Force", [-2, 1, 1, 0, 0, 0, 0]),
    ("Momentum", [-1, 1, 1, 0, 0, 0, 0]),
    ("Energy", [-2, 2, 1, 0, 0, 0, 0]),
    ("Work", [-2, 2, 1, 0, 0, 0, 0]),
    ("Torque", [-2, 2, 1, 0, 0, 0, 0]),
    ("Power", [-3, 2, 1, 0, 0, 0, 0]),
    ("Pressure", [-2, -1, 1, 0, 0, 0, 0]),
    ("Density", [0, -3, 1, 0, 0, 0, 0]),
    ("Charge", [1, 0, 0, 1, 0, 0, 0]),
    ("Voltage", [-3, 2, 1, -1, 0, 0, 0]),
    ("Capacitance", [4, -2, -1, 2, 0, 0, 0]),
    ("Resistance", [-3, 2, 1, -2, 0, 0, 0]),
    ("ElectricField", [-3, 1, 1, -1, 0, 0, 0]),
    ("MagneticField", [-2, 0, 1, -1, 0, 0, 0]),
    ("Entropy", [-2, 2, 1, 0, -1, 0, 0]),
];

struct UnitRow {
    name: &'static str,
    dim: Exps,
    scale: &'static str,
    topic: Topic,
    decomposition: &'static str,
}

const fn row(
    name: &'static str,
    dim: Exps,
    scale: &'static str,
    topic: Topic,
    decomposition: &'static str,
) -> UnitRow {
    UnitRow {
        name,
        dim,
        scale,
        topic,
        decomposition,
    }
}

const UNITS: &[UnitRow] = &[
    row("second", [1, 0, 0, 0, 0, 0, 0], "1", Topic::Mechanics, "second"),
    row("meter", [0, 1, 0, 0, 0, 0, 0], "1", Topic::Mechanics, "meter"),
    row("kilogram", [0, 0, 1, 0, 0, 0, 0], "1", Topic::Mechanics, "kilogram"),
    row("ampere", [0, 0, 0, 1, 0, 0, 0], "1", Topic::Electromagnetism, "ampere"),
    row("kelvin", [0, 0, 0, 0, 1, 0, 0], "1", Topic::Thermodynamics, "kelvin"),
    row("mole", [0, 0, 0, 0, 0, 1, 0], "1", Topic::Thermodynamics, "mole"),
    row("candela", [0, 0, 0, 0, 0, 0, 1], "1", Topic::Optics, "candela"),
    row("newton", [-2, 1, 1, 0, 0, 0, 0], "1", Topic::Mechanics, "kilogram meter second^-2"),
    row("pascal", [-2, -1, 1, 0, 0, 0, 0], "1", Topic::Mechanics, "kilogram meter^-1 second^-2"),
    row("joule", [-2, 2, 1, 0, 0, 0, 0], "1", Topic::Mechanics, "kilogram meter^2 second^-2"),
    row("watt", [-3, 2, 1, 0, 0, 0, 0], "1", Topic::Mechanics, "kilogram meter^2 second^-3"),
    row("hertz", [-1, 0, 0, 0, 0, 0, 0], "1", Topic::WavesAcoustics, "second^-1"),
    row("coulomb", [1, 0, 0, 1, 0, 0, 0], "1", Topic::Electromagnetism, "ampere second"),
    row("volt", [-3, 2, 1, -1, 0, 0, 0], "1", Topic::Electromagnetism, "kilogram meter^2 second^-3 ampere^-1"),
    row("farad", [4, -2, -1, 2, 0, 0, 0], "1", Topic::Electromagnetism, "kilogram^-1 meter^-2 second^4 ampere^2"),
    row("ohm", [-3, 2, 1, -2, 0, 0, 0], "1", Topic::Electromagnetism, "kilogram meter^2 second^-3 ampere^-2"),
    row("tesla", [-2, 0, 1, -1, 0, 0, 0], "1", Topic::Electromagnetism, "kilogram second^-2 ampere^-1"),
    row("gram", [0, 0, 1, 0, 0, 0, 0], "0.001", Topic::Mechanics, "kilogram"),
    row("liter", [0, 3, 0, 0, 0, 0, 0], "0.001", Topic::Thermodynamics, "meter^3"),
    row("minute", [1, 0, 0, 0, 0, 0, 0], "60", Topic::Mechanics, "second"),
    row("hour", [1, 0, 0, 0, 0, 0, 0], "3600", Topic::Mechanics, "second"),
    row("atmosphere", [-2, -1, 1, 0, 0, 0, 0], "101325", Topic::Thermodynamics, "kilogram meter^-1 second^-2"),
    row("electronvolt", [-2, 2, 1, 0, 0, 0, 0], "1.602176634e-19", Topic::ModernPhysics, "kilogram meter^2 second^-2"),
];

const PREFIXES: &[(&str, i32)] = &[
    ("yocto", -24),
    ("zepto", -21),
    ("atto", -18),
    ("femto", -15),
    ("pico", -12),
    ("nano", -9),
    ("micro", -6),
    ("milli", -3),
    ("centi", -2),
    ("deci", -1),
    ("deca", 1),
    ("hecto", 2),
    ("kilo", 3),
    ("mega", 6),
    ("giga", 9),
    ("tera", 12),
    ("peta", 15),
    ("exa", 18),
    ("zetta", 21),
    ("yotta", 24),
];

/// Immutable lookup tables. Build once with [`UnitDb::si`] or share
/// [`UnitDb::shared`].
#[derive(Debug, Clone)]
pub struct UnitDb {
    units: BTreeMap<String, UnitDef>,
    prefixes: BTreeMap<String, PrefixDef>,
    constants: BTreeMap<String, ConstantDef>,
    kinds: BTreeMap<String, KindAlias>,
    overrides: Vec<(String, NumericValue)>,
}

impl UnitDb {
    pub fn si() -> UnitDb {
        let units = UNITS
            .iter()
            .map(|r| {
                let def = UnitDef {
                    name: r.name.to_string(),
                    dim: Dimension::from_ints(r.dim),
                    scale: NumericValue::parse_decimal(r.scale)
                        .ok()
                        .and_then(|v| v.as_exact().cloned())
                        .expect("unit scale literal"),
                    topic: r.topic,
                    decomposition: r.decomposition,
                };
                (def.name.clone(), def)
            })
            .collect();
        let prefixes = PREFIXES
            .iter()
            .map(|&(n, p)| {
                (
                    n.to_string(),
                    PrefixDef {
                        name: n.to_string(),
                        power_of_ten: p,
                    },
                )
            })
            .collect();
        let kinds = KINDS
            .iter()
            .map(|&(n, d)| {
                (
                    n.to_string(),
                    KindAlias {
                        name: n.to_string(),
                        dim: Dimension::from_ints(d),
                    },
                )
            })
            .collect();
        let constants = [
            ConstantDef {
                name: "g".into(),
                value: ConstantValue::Exact(BigRational::new(49.into(), 5.into())),
                dim: Dimension::from_ints([-2, 1, 0, 0, 0, 0, 0]),
                topic: Some(Topic::Mechanics),
                provenance: "standard gravity rounded to 9.8 m/s^2",
                overridable: true,
            },
            ConstantDef {
                name: "K".into(),
                value: ConstantValue::Exact(BigRational::from_integer(9_000_000_000i64.into())),
                dim: Dimension::from_ints([-4, 3, 1, -2, 0, 0, 0]),
                topic: Some(Topic::Electromagnetism),
                provenance: "Coulomb constant rounded to 9e9 N m^2/C^2",
                overridable: true,
            },
            ConstantDef {
                name: "pi".into(),
                value: ConstantValue::Pi,
                dim: Dimension::dimensionless(),
                topic: None,
                provenance: "mathematical constant",
                overridable: false,
            },
        ]
        .into_iter()
        .map(|c| (c.name.clone(), c))
        .collect();
        UnitDb {
            units,
            prefixes,
            constants,
            kinds,
            overrides: Vec::new(),
        }
    }

    pub fn shared() -> &'static UnitDb {
        static DB: OnceLock<UnitDb> = OnceLock::new();
        DB.get_or_init(UnitDb::si)
    }

    /// A copy of this database with some constant values replaced. The
    /// dimension of an overridden constant is kept.
    pub fn with_constant_overrides(
        &self,
        overrides: &[(String, BigRational)],
    ) -> Result<UnitDb, UnitDbError> {
        let mut db = self.clone();
        for (name, value) in overrides {
            let def = db
                .constants
                .get_mut(name)
                .ok_or_else(|| unknown("constant", name, self.constants.keys()))?;
            if !def.overridable {
                return Err(UnitDbError::NotOverridable(name.clone()));
            }
            def.value = ConstantValue::Exact(value.clone());
            db.overrides
                .push((name.clone(), NumericValue::exact(value.clone())));
        }
        Ok(db)
    }

    pub fn overrides(&self) -> &[(String, NumericValue)] {
        &self.overrides
    }

    pub fn unit(&self, name: &str) -> Option<&UnitDef> {
        self.units.get(name)
    }

    pub fn prefix(&self, name: &str) -> Option<&PrefixDef> {
        self.prefixes.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<&ConstantDef> {
        self.constants.get(name)
    }

    pub fn kind(&self, name: &str) -> Option<&KindAlias> {
        self.kinds.get(name)
    }

    pub fn units(&self) -> impl Iterator<Item = &UnitDef> {
        self.units.values()
    }

    pub fn prefixes(&self) -> impl Iterator<Item = &PrefixDef> {
        self.prefixes.values()
    }

    pub fn constants(&self) -> impl Iterator<Item = &ConstantDef> {
        self.constants.values()
    }

    pub fn kinds(&self) -> impl Iterator<Item = &KindAlias> {
        self.kinds.values()
    }

    pub fn lookup_unit(&self, name: &str) -> Result<Quantity, UnitDbError> {
        self.units
            .get(name)
            .map(UnitDef::quantity)
            .ok_or_else(|| unknown("unit", name, self.units.keys()))
    }

    pub fn apply_prefix(
        &self,
        prefix: &str,
        q: &Quantity,
        cfg: &NumericConfig,
    ) -> Result<Quantity, UnitDbError> {
        let p = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| unknown("prefix", prefix, self.prefixes.keys()))?;
        Ok(q.smul(&NumericValue::exact(p.factor()), cfg))
    }

    pub fn lookup_constant(&self, name: &str) -> Result<Quantity, UnitDbError> {
        self.lookup_constant_with(name, &NumericConfig::default())
    }

    pub fn lookup_constant_with(
        &self,
        name: &str,
        cfg: &NumericConfig,
    ) -> Result<Quantity, UnitDbError> {
        self.constants
            .get(name)
            .map(|c| c.quantity(cfg))
            .ok_or_else(|| unknown("constant", name, self.constants.keys()))
    }

    pub fn lookup_kind(&self, name: &str) -> Result<Dimension, UnitDbError> {
        self.kinds
            .get(name)
            .map(|k| k.dim)
            .ok_or_else(|| unknown("kind", name, self.kinds.keys()))
    }

    /// Markdown table of every unit, prefix, constant and kind.
    pub fn unit_table(&self) -> String {
        let mut out = String::from("# Units\n\n| name | dimension | scale | topic |\n|---|---|---|---|\n");
        for u in self.units.values() {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                u.name,
                u.dim,
                NumericValue::exact(u.scale.clone()),
                u.topic
            ));
        }
        out.push_str("\n# Prefixes\n\n| name | factor |\n|---|---|\n");
        let mut prefixes: Vec<_> = self.prefixes.values().collect();
        prefixes.sort_by_key(|p| p.power_of_ten);
        for p in prefixes {
            out.push_str(&format!("| {} | 10^{} |\n", p.name, p.power_of_ten));
        }
        out.push_str("\n# Constants\n\n| name | value | dimension | topic | source |\n|---|---|---|---|---|\n");
        for c in self.constants.values() {
            let value = match &c.value {
                ConstantValue::Exact(r) => NumericValue::exact(r.clone()).to_string(),
                ConstantValue::Pi => "π".to_string(),
            };
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                c.name,
                value,
                c.dim,
                c.topic.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
                c.provenance
            ));
        }
        out.push_str("\n# Kinds\n\n| name | dimension |\n|---|---|\n");
        for k in self.kinds.values() {
            out.push_str(&format!("| {} | {} |\n", k.name, k.dim));
        }
        out
    }
}

fn unknown<'a>(
    category: &'static str,
    name: &str,
    candidates: impl Iterator<Item = &'a String>,
) -> UnitDbError {
    UnitDbError::UnknownIdentifier {
        category,
        name: name.to_string(),
        suggestions: near_matches(name, candidates),
    }
}

/// Up to three candidates within edit distance 2, closest first.
pub fn near_matches<'a>(name: &str, candidates: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut scored: Vec<(usize, &String)> = candidates
        .map(|c| (strsim::levenshtein(name, c), c))
        .filter(|(d, _)| *d <= 2)
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, c)| c.clone()).collect()
}
