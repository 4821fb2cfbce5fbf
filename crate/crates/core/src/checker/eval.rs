//! Numeric evaluation of expressions and propositions under an assignment.

use std::collections::BTreeMap;

use thiserror::Error;

use super::dims::{kind_dim, synth, DimEnv, Ty};
use crate::dimension::Dimension;
use crate::lang::{Expr, ExprKind, Func, Prop, PropKind, Span};
use crate::numeric::{NumericConfig, NumericError, NumericValue};
use crate::quantity::{Quantity, QuantityError};
use crate::unitdb::UnitDb;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("`{0}` has no value")]
    Unbound(String),
    #[error("StandardUnit with no dimension from context")]
    Unresolved(Span),
    #[error("{0} cannot be evaluated numerically")]
    Unsupported(&'static str),
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("{0}")]
    Other(String),
}

/// A function variable given pointwise by `∀ param, f(param) = body`.
#[derive(Debug, Clone)]
pub struct FnDef {
    pub param: String,
    pub body: Expr,
}

/// Values of scalar variables and definitions of function variables.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub scalars: BTreeMap<String, Quantity>,
    pub functions: BTreeMap<String, FnDef>,
}

impl Env {
    pub fn bind(&mut self, name: &str, q: Quantity) {
        self.scalars.insert(name.to_string(), q);
    }

    /// Sorted `name = value` pairs for display.
    pub fn render(&self) -> Vec<(String, String)> {
        self.scalars
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect()
    }
}

/// Evaluation context: unit database, variable dimensions and precision.
pub struct Evaluator<'a> {
    pub db: &'a UnitDb,
    pub dims: &'a DimEnv,
    pub cfg: &'a NumericConfig,
}

/// Outcome of a proposition: its truth value and whether any comparison
/// had to be decided on approximate values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truth {
    pub value: bool,
    pub approx: bool,
}

impl Truth {
    fn and(self, other: Truth) -> Truth {
        Truth {
            value: self.value && other.value,
            approx: self.approx || other.approx,
        }
    }
}

impl<'a> Evaluator<'a> {
    pub fn new(db: &'a UnitDb, dims: &'a DimEnv, cfg: &'a NumericConfig) -> Self {
        Evaluator { db, dims, cfg }
    }

    pub fn eval(&self, e: &Expr, env: &Env) -> Result<Quantity, EvalError> {
        self.eval_at(e, env, None, self.dims)
    }

    /// Evaluates with `d` as the dimension context for polymorphic terms.
    pub fn eval_expecting(&self, e: &Expr, env: &Env, d: Dimension) -> Result<Quantity, EvalError> {
        self.eval_at(e, env, Some(d), self.dims)
    }

    fn dim_of(&self, e: &Expr, dims: &DimEnv) -> Option<Dimension> {
        match synth(e, dims, self.db) {
            Ok(Ty::Dim(d)) => Some(d),
            _ => None,
        }
    }

    fn eval_at(
        &self,
        e: &Expr,
        env: &Env,
        expected: Option<Dimension>,
        dims: &DimEnv,
    ) -> Result<Quantity, EvalError> {
        use ExprKind::*;
        let cfg = self.cfg;
        let dimless = Some(Dimension::dimensionless());
        Ok(match &e.kind {
            Num(r) => {
                let v = NumericValue::exact(r.clone());
                match expected {
                    Some(d) if v.is_zero() => Quantity::new(v, d),
                    _ => Quantity::dimensionless(v),
                }
            }
            Const(c) => self
                .db
                .lookup_constant_with(c, cfg)
                .map_err(|err| EvalError::Other(err.to_string()))?,
            Var(v) => env
                .scalars
                .get(v)
                .cloned()
                .ok_or_else(|| EvalError::Unbound(v.clone()))?,
            Unit(u) => self
                .db
                .lookup_unit(u)
                .map_err(|err| EvalError::Other(err.to_string()))?,
            StandardUnit => match expected {
                Some(d) => Quantity::unit(d),
                None => return Err(EvalError::Unresolved(e.span)),
            },
            Prefix(p, a) => {
                let q = self.eval_at(a, env, expected, dims)?;
                self.db
                    .apply_prefix(p, &q, cfg)
                    .map_err(|err| EvalError::Other(err.to_string()))?
            }
            Add(a, b) | Sub(a, b) => {
                let d = expected
                    .or_else(|| self.dim_of(a, dims))
                    .or_else(|| self.dim_of(b, dims));
                let x = self.eval_at(a, env, d, dims)?;
                let y = self.eval_at(b, env, d.or(Some(x.dim)), dims)?;
                if matches!(e.kind, Add(..)) {
                    x.add(&y, cfg)?
                } else {
                    x.sub(&y, cfg)?
                }
            }
            Mul(a, b) => {
                let x = self.eval_at(a, env, None, dims)?;
                let y = self.eval_at(b, env, None, dims)?;
                x.mul(&y, cfg)?
            }
            Div(a, b) => {
                let x = self.eval_at(a, env, None, dims)?;
                let y = self.eval_at(b, env, None, dims)?;
                x.div(&y, cfg)?
            }
            Neg(a) => self.eval_at(a, env, expected, dims)?.neg(),
            SMul(c, q) => {
                let c = self.eval_at(c, env, dimless, dims)?;
                if !c.dim.is_dimensionless() {
                    return Err(QuantityError::DimensionMismatch {
                        expected: Dimension::dimensionless(),
                        found: c.dim,
                    }
                    .into());
                }
                self.eval_at(q, env, expected, dims)?.smul(&c.val, cfg)
            }
            Pow(a, r) => self.eval_at(a, env, None, dims)?.pow(*r, cfg)?,
            RPow(a, b) => {
                let x = self.scalar(a, env, dims)?;
                let y = self.scalar(b, env, dims)?;
                Quantity::dimensionless(x.rpow(&y, cfg)?)
            }
            Cast(a, k) => {
                let target = kind_dim(k, self.db).map_err(EvalError::Other)?;
                self.eval_at(a, env, Some(target), dims)?.cast(&target)?
            }
            Val(a) => {
                let d = self.dim_of(a, dims);
                Quantity::dimensionless(self.eval_at(a, env, d, dims)?.val.clone())
            }
            Norm(a) => {
                let d = self.dim_of(a, dims);
                Quantity::dimensionless(self.eval_at(a, env, d, dims)?.norm())
            }
            Fn(f, a) => {
                let x = self.scalar(a, env, dims)?;
                Quantity::dimensionless(match f {
                    Func::Sin => x.sin(cfg),
                    Func::Cos => x.cos(cfg),
                    Func::Exp => x.exp(cfg),
                    Func::Log => x.ln(cfg)?,
                    Func::Sqrt => x.sqrt(cfg)?,
                })
            }
            Apply(f, a) => {
                let def = env
                    .functions
                    .get(f)
                    .ok_or_else(|| EvalError::Unbound(f.clone()))?;
                let (dom, cod) = self
                    .dims
                    .functions
                    .get(f)
                    .copied()
                    .ok_or_else(|| EvalError::Unbound(f.clone()))?;
                let arg = self.eval_at(a, env, Some(dom), dims)?;
                let mut inner = env.clone();
                inner.bind(&def.param, arg);
                let mut inner_dims = dims.clone();
                inner_dims.scalars.insert(def.param.clone(), dom);
                self.eval_at(&def.body, &inner, Some(cod), &inner_dims)?
            }
            Deriv(..) => return Err(EvalError::Unsupported("a derivative")),
        })
    }

    fn scalar(&self, e: &Expr, env: &Env, dims: &DimEnv) -> Result<NumericValue, EvalError> {
        let q = self.eval_at(e, env, Some(Dimension::dimensionless()), dims)?;
        if !q.dim.is_dimensionless() {
            return Err(QuantityError::DimensionMismatch {
                expected: Dimension::dimensionless(),
                found: q.dim,
            }
            .into());
        }
        Ok(q.val)
    }

    /// Evaluates both sides of a relation with a shared expected dimension.
    fn sides(
        &self,
        a: &Expr,
        b: &Expr,
        env: &Env,
        dims: &DimEnv,
    ) -> Result<(Quantity, Quantity), EvalError> {
        let d = self.dim_of(a, dims).or_else(|| self.dim_of(b, dims));
        let x = self.eval_at(a, env, d, dims)?;
        let y = self.eval_at(b, env, d.or(Some(x.dim)), dims)?;
        if x.dim != y.dim {
            return Err(QuantityError::DimensionMismatch {
                expected: x.dim,
                found: y.dim,
            }
            .into());
        }
        Ok((x, y))
    }

    pub fn eval_prop(&self, p: &Prop, env: &Env) -> Result<Truth, EvalError> {
        self.prop_at(p, env, self.dims)
    }

    fn prop_at(&self, p: &Prop, env: &Env, dims: &DimEnv) -> Result<Truth, EvalError> {
        let cfg = self.cfg;
        match &p.kind {
            PropKind::Eq(a, b) => {
                if let Some(t) = self.function_eq(a, b, env, dims)? {
                    return Ok(t);
                }
                let (x, y) = self.sides(a, b, env, dims)?;
                Ok(Truth {
                    value: x.val.approx_eq(&y.val, cfg),
                    approx: !(x.val.is_exact() && y.val.is_exact()),
                })
            }
            PropKind::Ne(a, b) => {
                let (x, y) = self.sides(a, b, env, dims)?;
                Ok(Truth {
                    value: !x.val.approx_eq(&y.val, cfg),
                    approx: !(x.val.is_exact() && y.val.is_exact()),
                })
            }
            PropKind::Le(a, b) | PropKind::Lt(a, b) => {
                let (x, y) = self.sides(a, b, env, dims)?;
                let approx = !(x.val.is_exact() && y.val.is_exact());
                let value = if approx && x.val.approx_eq(&y.val, cfg) {
                    matches!(p.kind, PropKind::Le(..))
                } else {
                    let ord = x.val.compare(&y.val, cfg);
                    match p.kind {
                        PropKind::Le(..) => ord.is_le(),
                        _ => ord.is_lt(),
                    }
                };
                Ok(Truth { value, approx })
            }
            PropKind::And(a, b) => {
                let x = self.prop_at(a, env, dims)?;
                let y = self.prop_at(b, env, dims)?;
                Ok(x.and(y))
            }
            PropKind::Or(a, b) => {
                let x = self.prop_at(a, env, dims)?;
                let y = self.prop_at(b, env, dims)?;
                Ok(Truth {
                    value: x.value || y.value,
                    approx: x.approx || y.approx,
                })
            }
            PropKind::Implies(a, b) => {
                let x = self.prop_at(a, env, dims)?;
                if !x.value {
                    return Ok(Truth {
                        value: true,
                        approx: x.approx,
                    });
                }
                let y = self.prop_at(b, env, dims)?;
                Ok(Truth {
                    value: y.value,
                    approx: x.approx || y.approx,
                })
            }
            PropKind::ForallFinite {
                var,
                kind,
                values,
                body,
            } => {
                let d = match kind {
                    Some(k) => kind_dim(k, self.db).map_err(EvalError::Other)?,
                    None => Dimension::dimensionless(),
                };
                let mut inner_dims = dims.clone();
                inner_dims.scalars.insert(var.clone(), d);
                let mut acc = Truth {
                    value: true,
                    approx: false,
                };
                for v in values {
                    let q = self.eval_at(v, env, Some(d), dims)?;
                    let mut inner = env.clone();
                    inner.bind(var, q);
                    acc = acc.and(self.prop_at(body, &inner, &inner_dims)?);
                }
                Ok(acc)
            }
            PropKind::ForallFn { .. } => Err(EvalError::Unsupported("a quantifier over a continuum")),
        }
    }

    /// `f = g` for defined function variables: compared at sample points.
    fn function_eq(
        &self,
        a: &Expr,
        b: &Expr,
        env: &Env,
        dims: &DimEnv,
    ) -> Result<Option<Truth>, EvalError> {
        let (ExprKind::Var(f), ExprKind::Var(g)) = (&a.kind, &b.kind) else {
            return Ok(None);
        };
        let (Some(&(dom, _)), Some(_)) = (dims.functions.get(f), dims.functions.get(g)) else {
            return Ok(None);
        };
        let mut acc = Truth {
            value: true,
            approx: false,
        };
        for k in 0..8 {
            let mut inner = env.clone();
            let point = "§sample";
            inner.bind(point, Quantity::new(NumericValue::from_integer(k), dom));
            let mut inner_dims = dims.clone();
            inner_dims.scalars.insert(point.to_string(), dom);
            let x = Expr::synth(ExprKind::Apply(f.clone(), Box::new(Expr::var(point))));
            let y = Expr::synth(ExprKind::Apply(g.clone(), Box::new(Expr::var(point))));
            acc = acc.and(self.prop_at(&Prop::eq(x, y), &inner, &inner_dims)?);
        }
        Ok(Some(acc))
    }
}
