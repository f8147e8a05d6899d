//! Symbol table: declared types, levels, arities and the shape-based
//! constructor classification.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::term::Term;

/// Where a symbol lives. Type-level symbols are those whose declared type
/// ends in the sort `Type`; they split into constants and definable
/// functions. Everything else is an object-level function symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    ObjectFun,
    TypeConst,
    TypeFun,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::ObjectFun => write!(f, "object"),
            Level::TypeConst => write!(f, "type-const"),
            Level::TypeFun => write!(f, "type-fun"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub name: String,
    pub declared_type: Term,
    pub level: Level,
    /// Number of leading products of the declared type.
    pub arity: usize,
    /// Declared with `def` or head of at least one rewrite rule.
    pub definable: bool,
    /// Argument and result types all headed by fully applied type
    /// constants. Shape-based: a definable symbol can be a constructor.
    pub is_constructor: bool,
}

impl SymbolInfo {
    /// Symbols eligible as call targets and rule heads: object-level
    /// functions and definable type-level functions, but not type
    /// constants.
    pub fn is_function(&self) -> bool {
        matches!(self.level, Level::ObjectFun | Level::TypeFun)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

/// Ordered symbol table; insertion order drives all reporting.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: IndexMap<String, SymbolInfo>,
}

/// Count the leading products of a declared type; stops at the first
/// non-product.
pub fn arity_of(declared_type: &Term) -> usize {
    let mut t = declared_type;
    let mut n = 0;
    while let Term::Product { codomain, .. } = t {
        n += 1;
        t = codomain;
    }
    n
}

/// Strip the leading products, yielding the final codomain.
pub fn final_codomain(declared_type: &Term) -> &Term {
    let mut t = declared_type;
    while let Term::Product { codomain, .. } = t {
        t = codomain;
    }
    t
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn get(&self, name: &str) -> Option<&SymbolInfo> {
        self.symbols.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SymbolInfo> {
        self.symbols.values()
    }

    pub(crate) fn insert(&mut self, info: SymbolInfo) {
        self.symbols.insert(info.name.clone(), info);
    }

    pub(crate) fn get_mut(&mut self, name: &str) -> Option<&mut SymbolInfo> {
        self.symbols.get_mut(name)
    }

    /// True when `t`'s head is a type constant applied to exactly its
    /// arity.
    fn saturated_type_const(&self, t: &Term) -> Result<bool, ModelError> {
        let (head, args) = t.spine();
        let Term::Symbol(name) = head else {
            return Ok(false);
        };
        let info = self
            .get(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
        Ok(info.level == Level::TypeConst && args.len() == info.arity)
    }

    /// Shape-based constructor test for an object-level declared type:
    /// every argument type and the codomain must be a type constant
    /// applied to exactly its arity.
    pub fn constructor_shaped(&self, declared_type: &Term) -> Result<bool, ModelError> {
        let mut t = declared_type;
        while let Term::Product {
            domain, codomain, ..
        } = t
        {
            if !self.saturated_type_const(domain)? {
                return Ok(false);
            }
            t = codomain;
        }
        self.saturated_type_const(t)
    }

    /// Pattern test: a variable, or a constructor applied to exactly its
    /// arity with pattern arguments. Any other shape is not a pattern.
    pub fn is_pattern(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::Symbol(_) | Term::App(_, _) => {
                let (head, args) = t.spine();
                let Term::Symbol(name) = head else {
                    return false;
                };
                let Some(info) = self.get(name) else {
                    return false;
                };
                info.is_constructor
                    && args.len() == info.arity
                    && args.iter().all(|a| self.is_pattern(a))
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn type_const(name: &str, arity: usize) -> SymbolInfo {
        let mut ty = Term::Sort;
        for _ in 0..arity {
            ty = Term::arrow(Term::Sort, ty);
        }
        SymbolInfo {
            name: name.to_string(),
            declared_type: ty,
            level: Level::TypeConst,
            arity,
            definable: false,
            is_constructor: false,
        }
    }

    fn object(name: &str, ty: Term, sig: &Signature) -> SymbolInfo {
        SymbolInfo {
            name: name.to_string(),
            declared_type: ty.clone(),
            level: Level::ObjectFun,
            arity: arity_of(&ty),
            definable: false,
            is_constructor: sig.constructor_shaped(&ty).unwrap_or(false),
        }
    }

    fn nat_sig() -> Signature {
        let mut sig = Signature::new();
        sig.insert(type_const("Nat", 0));
        let nat = Term::symbol("Nat");
        let s = object("S", Term::arrow(nat.clone(), nat.clone()), &sig);
        sig.insert(s);
        let zero = object("0", nat.clone(), &sig);
        sig.insert(zero);
        let plus = object(
            "plus",
            Term::arrow(nat.clone(), Term::arrow(nat.clone(), nat.clone())),
            &sig,
        );
        sig.insert(plus);
        sig
    }

    #[test]
    fn arity_counts_leading_products() {
        assert_eq!(arity_of(&Term::Sort), 0);
        // Nat -> Type
        let f = Term::arrow(Term::symbol("Nat"), Term::Sort);
        assert_eq!(arity_of(&f), 1);
        // (x:Nat) -> (y:Nat) -> Nat
        let two = Term::product(
            "x",
            Term::symbol("Nat"),
            Term::product("y", Term::symbol("Nat"), Term::symbol("Nat")),
        );
        assert_eq!(arity_of(&two), 2);
        // stops at the first non-product: (Nat -> Nat) is the domain here
        let ho = Term::arrow(
            Term::arrow(Term::symbol("Nat"), Term::symbol("Nat")),
            Term::symbol("Nat"),
        );
        assert_eq!(arity_of(&ho), 1);
    }

    #[test]
    fn constructor_shape() {
        let sig = nat_sig();
        let nat = Term::symbol("Nat");
        // S : Int -> Int pattern from the integer example; same shape here
        assert!(sig
            .constructor_shaped(&Term::arrow(nat.clone(), nat.clone()))
            .unwrap());
        // 0 : Nat
        assert!(sig.constructor_shaped(&nat).unwrap());
        // higher-order argument breaks the shape
        let ho = Term::arrow(Term::arrow(nat.clone(), nat.clone()), nat.clone());
        assert!(!sig.constructor_shaped(&ho).unwrap());
        // unknown head errors
        let bad = Term::symbol("Unknown");
        assert_eq!(
            sig.constructor_shaped(&bad),
            Err(ModelError::UnknownSymbol("Unknown".to_string()))
        );
    }

    #[test]
    fn first_order_defined_symbols_are_constructor_shaped() {
        let sig = nat_sig();
        assert!(sig.get("plus").unwrap().is_constructor);
    }

    #[test]
    fn pattern_recognition() {
        let sig = nat_sig();
        assert!(sig.is_pattern(&Term::var("x")));
        // S (P x): P plays the same role as S in the nat signature
        let sp = Term::apply(
            Term::symbol("S"),
            [Term::apply(Term::symbol("S"), [Term::var("x")])],
        );
        assert!(sig.is_pattern(&sp));
        // plus x (S y) is a pattern because plus is constructor-shaped
        let p = Term::apply(
            Term::symbol("plus"),
            [
                Term::var("x"),
                Term::apply(Term::symbol("S"), [Term::var("y")]),
            ],
        );
        assert!(sig.is_pattern(&p));
        // under- and over-application are not patterns
        assert!(!sig.is_pattern(&Term::symbol("S")));
        let over = Term::apply(Term::symbol("S"), [Term::var("x"), Term::var("y")]);
        assert!(!sig.is_pattern(&over));
        // binders are not patterns
        assert!(!sig.is_pattern(&Term::lambda("x", Term::symbol("Nat"), Term::var("x"))));
    }

    #[test]
    fn pattern_arity_matches_arity_of() {
        // the two arity code paths agree: a constructor applied to
        // exactly arity_of(fresh vars) is a pattern, off-by-one is not
        let sig = nat_sig();
        for info in sig.iter().filter(|i| i.is_constructor) {
            let n = arity_of(&info.declared_type);
            assert_eq!(n, info.arity);
            let args: Vec<Term> = (0..n).map(|i| Term::var(format!("v{i}"))).collect();
            assert!(sig.is_pattern(&Term::apply(Term::symbol(&info.name), args.clone())));
            let mut more = args.clone();
            more.push(Term::var("extra"));
            assert!(!sig.is_pattern(&Term::apply(Term::symbol(&info.name), more)));
        }
    }
}
