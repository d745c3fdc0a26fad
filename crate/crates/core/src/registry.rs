//! Name-keyed registries of interchangeable strategies.
//!
//! Trace functionals, random-matrix ensembles and reference laws are each
//! accessed through a trait object; a [`Registry`] maps a stable name to a
//! constructor so that the CLI (or a config file) can select one at runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

type Factory<T> = Arc<dyn Fn() -> Box<T> + Send + Sync>;

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, (String, Factory<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: BTreeMap::new() }
    }

    /// Registers (or replaces) a constructor under `name`.
    pub fn register<F>(&mut self, name: &str, description: &str, factory: F) -> &mut Self
    where
        F: Fn() -> Box<T> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_owned(), (description.to_owned(), Arc::new(factory)));
        self
    }

    pub fn create(&self, name: &str) -> Result<Box<T>> {
        match self.entries.get(name) {
            Some((_, f)) => Ok(f()),
            None => Err(Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_owned(),
                available: self.names().join(", "),
            }),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    /// `(name, description)` pairs in name order.
    pub fn describe(&self) -> Vec<(&str, &str)> {
        self.entries.iter().map(|(k, (d, _))| (k.as_str(), d.as_str())).collect()
    }
}

/// Built-in trace functionals (`semicircular`).
pub fn traces() -> Registry<dyn crate::freetrace::TraceFunctional> {
    let mut r: Registry<dyn crate::freetrace::TraceFunctional> = Registry::new("trace");
    r.register("semicircular", "free standard semicircular family", || {
        Box::new(crate::freetrace::Semicircular::new())
    });
    r
}

/// Built-in matrix ensembles (`gue`, `bernoulli`).
pub fn ensembles() -> Registry<dyn crate::matrix_model::Ensemble> {
    let mut r: Registry<dyn crate::matrix_model::Ensemble> = Registry::new("ensemble");
    r.register("gue", "independent GUE matrices, entry variance 1/N", || Box::new(crate::matrix_model::Gue));
    r.register("bernoulli", "diagonal ±1 matrices, half of each sign (atom control)", || {
        Box::new(crate::matrix_model::BernoulliControl)
    });
    r
}

/// Built-in reference laws (`semicircle`, `free-poisson`).
pub fn reference_laws() -> Registry<dyn crate::spectral::ReferenceCdf> {
    let mut r: Registry<dyn crate::spectral::ReferenceCdf> = Registry::new("reference law");
    r.register("semicircle", "standard semicircle on [-2, 2]", || {
        Box::new(crate::spectral::Semicircle::new(1.0).expect("unit variance"))
    });
    r.register("free-poisson", "free Poisson (Marchenko-Pastur) law of rate 1 on [0, 4]", || {
        Box::new(crate::spectral::FreePoisson)
    });
    r
}
