//! One function per subcommand, each producing a [`Report`].

use modaldoc::adjunction::{
    am_modality, factorization_mismatches, factorize, factorize2_report, fiberwise_galois, triviality_checks,
};
use modaldoc::bundled::set_fragment;
use modaldoc::comonad::{cm_am_mismatches, cm_modality, em_adjunction, em_doctrine, em_universal_uniqueness, ma, mc};
use modaldoc::instances::kripke::kripke_doctrine;
use modaldoc::instances::presheaf::{presheaf_box_local, presheaf_box_oracle};
use modaldoc::instances::quantale::{bang_law_suite, quantale_core, quantale_doctrine};
use modaldoc::instances::topology::topological_doctrine;
use modaldoc::temporal::{exhaustive_oracle_check, gfp_modality, oracle, OracleReport};
use modaldoc::{run_suite, BranchLift, CoalgebraKind, DoctrineAdjunction, EmBundle, FCoalgebra, InteriorOp, Violation};

use crate::document::Document;
use crate::error::CliError;
use crate::model::{parse_lift, Declaration, Model, Object};
use crate::report::{Report, Row, Table};

/// Presheaves with more elements than this are not brute-forced by `check`.
pub const PRESHEAF_ORACLE_CAP: usize = 16;

pub fn load_path(path: &str, max_size: usize) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    Model::load(&Document::parse(&text)?, max_size)
}

fn declaration<'m>(model: &'m Model, name: &str) -> Result<&'m Declaration, CliError> {
    model
        .get(name)
        .ok_or_else(|| CliError::Usage(format!("no declaration named `{name}`")))
}

/// Runs the law suites of the named declarations, or of every declaration when `names` is empty.
pub fn check(model: &Model, names: &[String]) -> Result<Report, CliError> {
    let mut report = Report::new("check");
    let chosen: Vec<&Declaration> = if names.is_empty() {
        model.declarations.iter().collect()
    } else {
        names.iter().map(|n| declaration(model, n)).collect::<Result<_, _>>()?
    };
    for d in chosen {
        check_declaration(&mut report, d)?;
    }
    Ok(report)
}

fn oracle_verdict(report: &mut Report, check: String, r: &OracleReport) {
    let witnesses = r
        .mismatches
        .iter()
        .map(|m| format!("{} {:?} at {}: fixpoint {}, oracle {}", m.coalgebra, m.lift, m.alpha, m.fixpoint, m.oracle))
        .collect();
    let detail = format!("{} subsets, at most {} iterations", r.subsets, r.max_iterations);
    report.flag(check, r.passes(), detail, witnesses);
}

fn lifts_for(c: &FCoalgebra) -> &'static [BranchLift] {
    match c.kind {
        CoalgebraKind::Stream => &[BranchLift::Identity],
        CoalgebraKind::Tree => &[BranchLift::Forall, BranchLift::Exists],
    }
}

fn check_declaration(report: &mut Report, d: &Declaration) -> Result<(), CliError> {
    let name = &d.name;
    match &d.object {
        Object::Poset(p) => report.laws(format!("{name}: poset laws"), &p.law_violations()),
        Object::Category(c) => report.laws(format!("{name}: category laws"), &c.law_violations()),
        Object::Doctrine(doc) => report.laws(format!("{name}: doctrine laws"), &doc.check()),
        Object::Frame(k) => {
            let inst = kripke_doctrine(k, set_fragment(1))?;
            report.laws(format!("{name}: interior laws of the box"), &inst.op.check());
        }
        Object::Space(s) => {
            let inst = topological_doctrine(vec![s.clone()])?;
            report.laws(format!("{name}: interior laws of the topological interior"), &inst.op.check());
        }
        Object::Quantale(q) => {
            report.laws(format!("{name}: quantale laws"), &q.law_violations());
            report.laws(format!("{name}: core"), &quantale_core(q)?.verification);
            let inst = quantale_doctrine(q, set_fragment(2))?;
            report.laws(format!("{name}: interior laws of bang"), &inst.bang.check());
            for law in bang_law_suite(&inst).laws {
                report.laws(format!("{name}: bang {}", law.law), &law.violations);
            }
        }
        Object::Presheaf(p) => {
            let total = p.presheaf.total();
            if total > PRESHEAF_ORACLE_CAP {
                report
                    .notes
                    .push(format!("{name}: oracle refused, {total} elements above {PRESHEAF_ORACLE_CAP}"));
            } else {
                let v: Vec<Violation> = (0..1usize << total)
                    .filter_map(|alpha| {
                        let (local, brute) = (
                            presheaf_box_local(&p.frame, &p.presheaf, alpha),
                            presheaf_box_oracle(&p.frame, &p.presheaf, alpha),
                        );
                        (local != brute).then(|| Violation::new("box against subpresheaf union", format!("mask {alpha:#b}")))
                    })
                    .collect();
                report.laws(format!("{name}: box matches the subpresheaf oracle"), &v);
            }
        }
        Object::Coalgebra(c) => {
            let cases: Vec<(FCoalgebra, BranchLift)> = lifts_for(c).iter().map(|&l| (c.clone(), l)).collect();
            let r = exhaustive_oracle_check(&cases)?;
            oracle_verdict(report, format!("{name}: fixed points match path oracles"), &r);
        }
        Object::Interior(op) => report.laws(format!("{name}: interior laws"), &op.check()),
        Object::Adjunction(a) => {
            report.laws(format!("{name}: adjunction laws"), &a.check()?);
            report.laws(format!("{name}: interior laws of the induced modality"), &am_modality(a)?.1.check());
        }
        Object::Comonad(c) => {
            report.laws(format!("{name}: comonad laws"), &c.check()?);
            let bundle = em_doctrine(c)?;
            report.laws(format!("{name}: Eilenberg-Moore fibers"), &bundle.verification);
            report.laws(format!("{name}: Eilenberg-Moore adjunction"), &em_adjunction(&bundle)?.check()?);
            report.laws(format!("{name}: CM equals AM of the EM adjunction"), &cm_am_mismatches(&bundle)?);
        }
        Object::Query(q) => {
            let fix = gfp_modality(&q.coalgebra, q.lift, q.alpha)?;
            let expected = oracle(&q.coalgebra, q.lift, q.alpha)?;
            let show = |m| q.coalgebra.subset_name(m);
            let mut witnesses = Vec::new();
            if fix.value != expected {
                witnesses.push(format!("fixpoint {}, oracle {}", show(fix.value), show(expected)));
            }
            if let Some(e) = q.expect.filter(|&e| e != fix.value) {
                witnesses.push(format!("fixpoint {}, expected {}", show(fix.value), show(e)));
            }
            let detail = format!("{} {} = {}", q.lift.modality_name(), show(q.alpha), show(fix.value));
            report.flag(format!("{name}: query"), witnesses.is_empty(), detail, witnesses);
        }
    }
    Ok(())
}

/// The construction requested by `derive`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `AM` of an adjunction or `CM` of a comonad.
    Modality,
    Mc,
    Ma,
    /// The vertical factor of an adjunction.
    Vertical,
}

pub fn derive(model: &Model, kind: &str, name: &str, construction: Construction) -> Result<Report, CliError> {
    let d = declaration(model, name)?;
    if d.object.kind() != kind {
        return Err(CliError::Usage(format!("`{name}` is a {}, not a {kind}", d.object.kind())));
    }
    let mut report = Report::new("derive");
    match (construction, &d.object) {
        (Construction::Modality, Object::Adjunction(a)) => {
            let (_, op) = am_modality(a)?;
            modality_tables(&mut report, name, &op);
        }
        (Construction::Modality, Object::Comonad(c)) => {
            let (_, op) = cm_modality(&em_doctrine(c)?)?;
            modality_tables(&mut report, name, &op);
        }
        (Construction::Mc, Object::Interior(op)) => {
            let c = mc(op)?;
            for x in c.doctrine().base().objects() {
                let obj = c.doctrine().base().object_name(x);
                report.tables.push(Table::of_map(format!("κ at {obj}"), c.kappa(x)));
            }
            report.laws(format!("MC({name}): comonad laws"), &c.check()?);
        }
        (Construction::Ma, Object::Interior(op)) => {
            let adj = ma(op)?;
            report.tables.extend(Table::of_arrow("left", adj.left()));
            report.tables.extend(Table::of_arrow("right", adj.right()));
            report.laws(format!("MA({name}): adjunction laws"), &adj.check()?);
            report.laws(format!("MA({name}): fiberwise Galois connection"), &fiberwise_galois(&adj)?);
        }
        (Construction::Vertical, Object::Adjunction(a)) => {
            let fac = factorize(a)?;
            report.tables.extend(Table::of_arrow("λ", fac.vertical.left()));
            report.tables.extend(Table::of_arrow("(Pη)(ρL)", fac.vertical.right()));
            report.laws(format!("{name}: vertical factor adjunction laws"), &fac.vertical.check()?);
        }
        (c, o) => {
            return Err(CliError::Usage(format!("{c:?} cannot be derived from a {}", o.kind())));
        }
    }
    Ok(report)
}

fn modality_tables(report: &mut Report, name: &str, op: &InteriorOp) {
    report.tables.extend(Table::of_op("□", op));
    report.laws(format!("{name}: interior laws of the induced modality"), &op.check());
}

/// Dumps the Eilenberg-Moore doctrine of a comonad and certifies its universal property.
pub fn em(model: &Model, name: &str, max_size: usize) -> Result<Report, CliError> {
    let c = match &declaration(model, name)?.object {
        Object::Comonad(c) => c,
        o => return Err(CliError::Usage(format!("`{name}` is a {}, not a comonad", o.kind()))),
    };
    let mut report = Report::new("em");
    let bundle = em_doctrine(c)?;
    report.tables.extend(em_tables(&bundle));
    report.laws(format!("{name}: comonad laws"), &c.check()?);
    report.laws(format!("{name}: fibers are fixed points of P(c)∘κ"), &bundle.verification);
    report.laws(format!("{name}: Eilenberg-Moore adjunction"), &em_adjunction(&bundle)?.check()?);
    report.laws(format!("{name}: CM equals AM of the EM adjunction"), &cm_am_mismatches(&bundle)?);
    match em_universal_uniqueness(&bundle, &bundle.forgetful, &bundle.universal, max_size as u128) {
        Ok(u) => report.flag(
            format!("{name}: universal factor is unique"),
            u.factorizations == 1 && u.matches_constructed,
            format!("{} candidates, {} factorization(s)", u.candidates, u.factorizations),
            Vec::new(),
        ),
        Err(modaldoc::Error::TooLarge { needed, cap, .. }) => report
            .notes
            .push(format!("{name}: uniqueness search refused, {} candidates above --max-size {cap}", count(needed))),
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn count(n: u128) -> String {
    match n {
        u128::MAX => "at least 2^128".into(),
        n => n.to_string(),
    }
}

/// Each coalgebra `⟨C, c⟩` with its fiber listed as elements of the carrier fiber.
fn em_tables(bundle: &EmBundle) -> Vec<Table> {
    let e = bundle.em.base();
    e.objects()
        .map(|o| {
            let carrier = bundle.forgetful.functor().obj(o);
            let fiber = bundle.comonad.doctrine().fiber(carrier);
            let em_fiber = bundle.em.fiber(o);
            let rows = em_fiber
                .elements()
                .map(|a| Row {
                    from: em_fiber.name(a).to_string(),
                    to: fiber.name(bundle.members[o][a]).to_string(),
                })
                .collect();
            Table {
                name: format!("coalgebra {}", e.object_name(o)),
                rows,
            }
        })
        .collect()
}

/// Both factorizations of an adjunction and, when vertical, its triviality table.
pub fn factor(model: &Model, name: &str) -> Result<Report, CliError> {
    let a: &DoctrineAdjunction = match &declaration(model, name)?.object {
        Object::Adjunction(a) => a,
        o => return Err(CliError::Usage(format!("`{name}` is a {}, not an adjunction", o.kind()))),
    };
    let mut report = Report::new("factor");
    let fac = factorize(a)?;
    report.laws(format!("{name}: vertical factor"), &fac.vertical.check()?);
    report.laws(format!("{name}: change-of-base factor"), &fac.base_change.check()?);
    report.laws(format!("{name}: composites equal the original"), &factorization_mismatches(a, &fac)?);
    let r = factorize2_report(a)?;
    let mut unreached = Vec::new();
    let mut collisions = Vec::new();
    let mut rows = Vec::new();
    for o in &r.objects {
        unreached.extend(o.unreached.iter().map(|u| Violation::new("λ misses", format!("{u} at {}", o.object))));
        collisions.extend(
            o.collisions
                .iter()
                .map(|(x, y)| Violation::new("(Pη)(ρL) identifies", format!("{x} and {y} at {}", o.object))),
        );
        rows.push(Row {
            from: o.object.clone(),
            to: o.stable_count.to_string(),
        });
    }
    report.tables.push(Table {
        name: "stable elements".into(),
        rows,
    });
    report.laws(format!("{name}: λ onto the stable part"), &unreached);
    report.laws(format!("{name}: (Pη)(ρL) injective on the stable part"), &collisions);
    report.laws(format!("{name}: squares through the stable part"), &r.squares);
    report.laws(format!("{name}: box fixes stable elements"), &r.box_identity_on_stable);
    report.laws(format!("{name}: adjunctions through the stable part"), &r.adjunctions);
    if a.is_vertical() {
        for row in triviality_checks(a)? {
            let v = row.violations();
            report.laws(format!("{name}: triviality at {}", row.object), &v);
        }
    }
    Ok(report)
}

pub fn temporal(model: &Model, op: &str, coalgebra: &str, alpha: Option<&str>) -> Result<Report, CliError> {
    let lift = parse_lift(op).ok_or_else(|| CliError::Usage(format!("`{op}` is not G, AG or EG")))?;
    let c = match &declaration(model, coalgebra)?.object {
        Object::Coalgebra(c) => c,
        o => return Err(CliError::Usage(format!("`{coalgebra}` is a {}, not a coalgebra", o.kind()))),
    };
    let mut report = Report::new("temporal");
    let bound = c.len() + 1;
    match alpha {
        Some(text) => {
            let a = c.parse_subset(text)?;
            let fix = gfp_modality(c, lift, a)?;
            let expected = oracle(c, lift, a)?;
            report.result = Some(c.subset_name(fix.value));
            let witnesses = match fix.value == expected {
                true => Vec::new(),
                false => vec![format!("oracle gives {}", c.subset_name(expected))],
            };
            report.flag(format!("{op} {} matches the path oracle", c.subset_name(a)), witnesses.is_empty(), "", witnesses);
            report.flag(
                "iterations within |A|+1",
                fix.iterations <= bound,
                format!("{} of {bound}", fix.iterations),
                Vec::new(),
            );
        }
        None => {
            let mut rows = Vec::new();
            for a in 0..=c.full() {
                rows.push(Row {
                    from: c.subset_name(a),
                    to: c.subset_name(gfp_modality(c, lift, a)?.value),
                });
            }
            report.tables.push(Table {
                name: format!("{op} on {coalgebra}"),
                rows,
            });
            let r = exhaustive_oracle_check(&[(c.clone(), lift)])?;
            oracle_verdict(&mut report, format!("{op} matches the path oracle on every subset"), &r);
        }
    }
    Ok(report)
}

/// The library acceptance suite, one verdict per check line.
pub fn suite(seed: u64) -> Report {
    let mut report = Report::new("suite");
    report.seed = Some(seed);
    for c in run_suite(seed).criteria {
        for line in c.checks {
            report.flag(format!("{}. {}: {}", c.id, c.title, line.name), line.passed, line.detail, Vec::new());
        }
    }
    report
}
