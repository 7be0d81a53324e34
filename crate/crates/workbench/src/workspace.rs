//! Resolution of a parsed document into validated structures.

use std::sync::Arc;

use quantale::module::Handedness;
use quantale::saturation::RelationSpec;
use quantale::transforms::Kernel;
use quantale::{Error, FiniteSupLattice, QModule, Quantale, Result};

use crate::format::{Document, Item, Kind, LatticeDecl, QuantaleDecl};

#[derive(Clone, Debug)]
pub enum Structure {
    Lattice(FiniteSupLattice),
    Quantale(Arc<Quantale>),
    Module(QModule),
    Kernel(Kernel),
    Relation(RelationSpec),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub kind: Kind,
    pub name: String,
    pub structure: Result<Structure>,
}

/// Every declaration of a document, validated in file order. A declaration
/// referring to an invalid one fails with the referenced name.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub entries: Vec<Entry>,
}

impl Workspace {
    pub fn from_source(src: &str) -> Result<Self> {
        Ok(Self::resolve(&crate::format::parse(src)?))
    }

    pub fn resolve(doc: &Document) -> Self {
        let mut ws = Workspace::default();
        for item in &doc.items {
            let structure = ws.build(item);
            ws.entries.push(Entry {
                kind: item.kind(),
                name: item.name().to_owned(),
                structure,
            });
        }
        ws
    }

    fn get(&self, kind: Kind, name: &str) -> Result<&Structure> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.kind == kind && e.name == name)
            .ok_or_else(|| Error::UnknownStructure(format!("{} {}", kind.keyword(), name)))?;
        entry
            .structure
            .as_ref()
            .map_err(|_| Error::UnknownStructure(format!("{} {} is invalid", kind.keyword(), name)))
    }

    pub fn lattice(&self, name: &str) -> Result<&FiniteSupLattice> {
        match self.get(Kind::Lattice, name)? {
            Structure::Lattice(l) => Ok(l),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn quantale(&self, name: &str) -> Result<&Arc<Quantale>> {
        match self.get(Kind::Quantale, name)? {
            Structure::Quantale(q) => Ok(q),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn module(&self, name: &str) -> Result<&QModule> {
        match self.get(Kind::Module, name)? {
            Structure::Module(m) => Ok(m),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn kernel(&self, name: &str) -> Result<&Kernel> {
        match self.get(Kind::Kernel, name)? {
            Structure::Kernel(k) => Ok(k),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn relation(&self, name: &str) -> Result<&RelationSpec> {
        match self.get(Kind::Relation, name)? {
            Structure::Relation(r) => Ok(r),
            _ => unreachable!("kind checked"),
        }
    }

    /// Valid structures of one kind, in file order.
    pub fn valid(&self, kind: Kind) -> impl Iterator<Item = (&str, &Structure)> {
        self.entries
            .iter()
            .filter(move |e| e.kind == kind)
            .filter_map(|e| e.structure.as_ref().ok().map(|s| (e.name.as_str(), s)))
    }

    pub fn quantales(&self) -> Vec<(&str, &Arc<Quantale>)> {
        self.valid(Kind::Quantale)
            .map(|(n, s)| match s {
                Structure::Quantale(q) => (n, q),
                _ => unreachable!("kind checked"),
            })
            .collect()
    }

    pub fn modules(&self) -> Vec<(&str, &QModule)> {
        self.valid(Kind::Module)
            .map(|(n, s)| match s {
                Structure::Module(m) => (n, m),
                _ => unreachable!("kind checked"),
            })
            .collect()
    }

    pub fn kernels(&self) -> Vec<(&str, &Kernel)> {
        self.valid(Kind::Kernel)
            .map(|(n, s)| match s {
                Structure::Kernel(k) => (n, k),
                _ => unreachable!("kind checked"),
            })
            .collect()
    }

    pub fn relations(&self) -> Vec<(&str, &RelationSpec)> {
        self.valid(Kind::Relation)
            .map(|(n, s)| match s {
                Structure::Relation(r) => (n, r),
                _ => unreachable!("kind checked"),
            })
            .collect()
    }

    /// First declaration with this name among the given kinds.
    pub fn lookup(&self, name: &str, kinds: &[Kind]) -> Result<&Entry> {
        kinds
            .iter()
            .find_map(|&k| self.entries.iter().find(|e| e.kind == k && e.name == name))
            .ok_or_else(|| Error::UnknownStructure(name.to_owned()))
    }

    fn build(&self, item: &Item) -> Result<Structure> {
        match item {
            Item::Lattice(d) => {
                Ok(Structure::Lattice(FiniteSupLattice::validate(&d.elements, &d.order)?))
            }
            Item::Quantale(d) => {
                let l = self.lattice(&d.lattice)?.clone();
                Ok(Structure::Quantale(Arc::new(Quantale::from_rows(
                    l,
                    &d.mul,
                    d.unit.as_deref(),
                )?)))
            }
            Item::Module(d) => {
                let q = self.quantale(&d.quantale)?;
                let l = self.lattice(&d.lattice)?.clone();
                let scalars = match d.side {
                    Handedness::Left => Arc::clone(q),
                    Handedness::Right => Arc::new(q.opposite()),
                };
                let m = QModule::from_rows(scalars, l, &d.action)?;
                Ok(Structure::Module(match d.side {
                    Handedness::Left => m,
                    Handedness::Right => QModule::with_handedness(
                        Arc::clone(m.scalars_arc()),
                        m.carrier().clone(),
                        m.action_table().to_vec(),
                        Handedness::Right,
                    )?,
                }))
            }
            Item::Kernel(d) => {
                let q = self.quantale(&d.quantale)?;
                if d.entries.len() != d.rows.len() || d.entries.iter().any(|r| r.len() != d.cols.len()) {
                    return Err(Error::TableShape {
                        expected: d.rows.len() * d.cols.len(),
                        found: d.entries.iter().map(Vec::len).sum(),
                    });
                }
                let entries = d
                    .entries
                    .iter()
                    .flatten()
                    .map(|s| q.elem(s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Structure::Kernel(Kernel::new(
                    Arc::clone(q),
                    d.rows.clone(),
                    d.cols.clone(),
                    entries,
                    d.side,
                )?))
            }
            Item::Relation(d) => {
                let q = self.quantale(&d.quantale)?;
                Ok(Structure::Relation(RelationSpec::from_names(Arc::clone(q), &d.pairs)?))
            }
        }
    }
}

/// A lattice declaration listing covering pairs.
pub fn lattice_decl(name: &str, l: &FiniteSupLattice) -> LatticeDecl {
    LatticeDecl {
        name: name.to_owned(),
        elements: l.names().to_vec(),
        order: l
            .covers()
            .into_iter()
            .map(|(a, b)| (l.name(a).to_owned(), l.name(b).to_owned()))
            .collect(),
    }
}

/// Declarations of a quantale and of its lattice, both named `name`.
pub fn quantale_decls(name: &str, q: &Quantale) -> [Item; 2] {
    let mul = q
        .elements()
        .map(|a| q.elements().map(|b| q.name(q.mul(a, b)).to_owned()).collect())
        .collect();
    [
        Item::Lattice(lattice_decl(name, q.lattice())),
        Item::Quantale(QuantaleDecl {
            name: name.to_owned(),
            lattice: name.to_owned(),
            mul,
            unit: q.unit().map(|u| q.name(u).to_owned()),
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    #[test]
    fn invalid_dependencies_are_reported_by_name() {
        let ws = Workspace::from_source(
            "lattice L { elements a b; }\nquantale Q over L { mul { a a; a a; } }\nquantale P over M { mul { a; } }",
        )
        .unwrap();
        assert!(ws.entries[0].structure.is_err());
        assert_eq!(
            ws.entries[1].structure.as_ref().unwrap_err(),
            &Error::UnknownStructure("lattice L is invalid".into())
        );
        assert_eq!(
            ws.entries[2].structure.as_ref().unwrap_err(),
            &Error::UnknownStructure("lattice M".into())
        );
    }

    #[test]
    fn quantale_declarations_round_trip() {
        let src = "lattice C { elements 0 h 1; order (0,h) (h,1); }\nquantale C over C { mul { 0 0 0; 0 0 h; 0 h 1; } unit 1; }";
        let ws = Workspace::from_source(src).unwrap();
        let q = ws.quantale("C").unwrap();
        let doc = Document {
            items: quantale_decls("C", q).to_vec(),
        };
        assert_eq!(parse(&doc.to_text()).unwrap(), parse(src).unwrap());
    }

    #[test]
    fn right_modules_act_through_the_opposite() {
        let src = "lattice C { elements 0 a 1; order (0,a) (a,1); }\n\
                   quantale Z over C { mul { 0 0 0; 0 a a; 0 1 1; } }\n\
                   module R over Z on C { side right; action { 0 0 0; 0 a 1; 0 a 1; } }";
        let ws = Workspace::from_source(src).unwrap();
        let q = ws.quantale("Z").unwrap();
        let m = ws.module("R").unwrap();
        assert_eq!(m.handedness(), Handedness::Right);
        assert_eq!(*m.scalars(), q.opposite());
        for a in q.elements() {
            for v in q.elements() {
                assert_eq!(m.act(a, v), q.mul(v, a));
            }
        }
    }
}
