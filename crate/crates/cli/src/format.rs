//! The line-oriented text format for presquare and square groups.
//!
//! See `docs/format.md` for the grammar. Parsing is strict: unknown sections and keys,
//! duplicates and elements of the wrong length are errors carrying a line number.

use std::fmt::Write as _;

use quadfun::abelian::{AbHom, Elem, FgAbGroup};
use quadfun::nil2::{Cocycle, CocycleForm, Nil2Group};
use quadfun::psg::PreSquareGroup;
use quadfun::sg::{PointMap, QuadraticMap, SquareGroup};
use quadfun::{Error, Result};

/// A parsed document: a presquare group, or a square group when an `[H]` section is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Psg(PreSquareGroup),
    Sg(SquareGroup),
}

impl Document {
    /// The presquare group, `℘(Q)` for a square group.
    pub fn to_psg(&self) -> PreSquareGroup {
        match self {
            Document::Psg(m) => m.clone(),
            Document::Sg(q) => q.wp(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            Document::Psg(m) => write_psg(m),
            Document::Sg(q) => write_sg(q),
        }
    }
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim().to_string();
            if out.iter().any(|s| s.name == name) {
                return Err(at(line, format!("duplicate section [{name}]")));
            }
            out.push(Section { name, line, entries: Vec::new() });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| at(line, "expected `key = value`"))?;
        let section = out.last_mut().ok_or_else(|| at(line, "entry outside of a section"))?;
        let key = key.trim().to_string();
        if section.entries.iter().any(|e| e.key == key) {
            return Err(at(line, format!("duplicate key `{key}` in [{}]", section.name)));
        }
        section.entries.push(Entry { key, value: value.trim().to_string(), line });
    }
    Ok(out)
}

struct Fields<'a> {
    section: &'a Section,
}

impl<'a> Fields<'a> {
    fn allow(&self, keys: &[&str]) -> Result<()> {
        for e in &self.section.entries {
            if !keys.contains(&e.key.as_str()) {
                return Err(at(e.line, format!("unknown key `{}` in [{}]", e.key, self.section.name)));
            }
        }
        Ok(())
    }

    fn entry(&self, key: &str) -> Result<&'a Entry> {
        self.section
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| at(self.section.line, format!("[{}] needs `{key}`", self.section.name)))
    }

    fn group(&self, key: &str) -> Result<FgAbGroup> {
        let e = self.entry(key)?;
        e.value.parse().map_err(|err: Error| at(e.line, err))
    }

    fn word(&self, key: &str, allowed: &[&str]) -> Result<&'a str> {
        let e = self.entry(key)?;
        if allowed.contains(&e.value.as_str()) {
            Ok(&e.value)
        } else {
            Err(at(e.line, format!("`{key}` must be one of {}", allowed.join(", "))))
        }
    }

    fn json<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<(T, usize)> {
        let e = self.entry(key)?;
        let v = serde_json::from_str(&e.value).map_err(|err| at(e.line, format!("`{key}`: {err}")))?;
        Ok((v, e.line))
    }

    fn elems(&self, key: &str, g: &FgAbGroup, count: usize) -> Result<Vec<Elem>> {
        let (v, line): (Vec<Elem>, _) = self.json(key)?;
        if v.len() != count {
            return Err(at(line, format!("`{key}` needs {count} elements of {g}, got {}", v.len())));
        }
        check_elems(&v, g, line, key)?;
        Ok(v.iter().map(|x| g.reduce(x)).collect())
    }

    fn form(&self, key: &str, g: &FgAbGroup, n: usize) -> Result<Vec<Vec<Elem>>> {
        let (v, line): (Vec<Vec<Elem>>, _) = self.json(key)?;
        if v.len() != n || v.iter().any(|r| r.len() != n) {
            return Err(at(line, format!("`{key}` must be a {n}x{n} array of elements of {g}")));
        }
        for row in &v {
            check_elems(row, g, line, key)?;
        }
        Ok(v.iter().map(|r| r.iter().map(|x| g.reduce(x)).collect()).collect())
    }

    fn hom(&self, key: &str, source: &FgAbGroup, target: &FgAbGroup) -> Result<AbHom> {
        let imgs = self.elems(key, target, source.ngens())?;
        let line = self.entry(key)?.line;
        AbHom::from_images(source.clone(), target.clone(), &imgs).map_err(|err| at(line, err))
    }
}

fn check_elems(v: &[Elem], g: &FgAbGroup, line: usize, key: &str) -> Result<()> {
    match v.iter().find(|x| x.len() != g.ngens()) {
        Some(x) => Err(at(line, format!("`{key}`: {x:?} is not an element of {g} ({} coordinates)", g.ngens()))),
        None => Ok(()),
    }
}

struct Doc {
    sections: Vec<Section>,
}

impl Doc {
    fn get(&self, name: &str) -> Option<Fields<'_>> {
        self.sections.iter().find(|s| s.name == name).map(|section| Fields { section })
    }

    fn need(&self, name: &str) -> Result<Fields<'_>> {
        self.get(name).ok_or_else(|| Error::Parse(format!("missing section [{name}]")))
    }

    fn allow(&self, names: &[&str]) -> Result<()> {
        match self.sections.iter().find(|s| !names.contains(&s.name.as_str())) {
            Some(s) => Err(at(s.line, format!("unknown section [{}]", s.name))),
            None => Ok(()),
        }
    }
}

const PSG_SECTIONS: [&str; 5] = ["Me", "Mee", "sigma", "P", "bracket"];
const SG_SECTIONS: [&str; 9] = ["Me", "Mee", "sigma", "P", "bracket", "H", "H.h", "H.g", "H.cross"];

pub fn parse_document(text: &str) -> Result<Document> {
    let doc = Doc { sections: sections(text)? };
    if doc.get("H").is_some() {
        doc.allow(&SG_SECTIONS)?;
        parse_sg_doc(&doc).map(Document::Sg)
    } else {
        doc.allow(&PSG_SECTIONS)?;
        parse_psg_doc(&doc).map(Document::Psg)
    }
}

pub fn parse_psg(text: &str) -> Result<PreSquareGroup> {
    match parse_document(text)? {
        Document::Psg(m) => Ok(m),
        Document::Sg(_) => Err(Error::Parse("expected a presquare group, found an [H] section".into())),
    }
}

pub fn parse_sg(text: &str) -> Result<SquareGroup> {
    match parse_document(text)? {
        Document::Sg(q) => Ok(q),
        Document::Psg(_) => Err(Error::Parse("expected a square group: missing section [H]".into())),
    }
}

fn parse_me(doc: &Doc) -> Result<Nil2Group> {
    let f = doc.need("Me")?;
    f.allow(&["quotient", "center_part", "cocycle", "bilinear", "carries", "values"])?;
    let q = f.group("quotient")?;
    let c = f.group("center_part")?;
    let n = q.ngens();
    let line = f.entry("cocycle")?.line;
    let cocycle = match f.word("cocycle", &["form", "table"])? {
        "form" => Cocycle::Form(CocycleForm { bilinear: f.form("bilinear", &c, n)?, carries: f.elems("carries", &c, n)? }),
        _ => {
            let order = q.order().ok_or_else(|| at(line, "a cocycle table needs a finite quotient"))?;
            let count = usize::try_from(order * order).map_err(|_| at(line, "quotient too large"))?;
            Cocycle::Table(f.elems("values", &c, count)?)
        }
    };
    Nil2Group::new(q, c, cocycle).map_err(|e| at(line, e))
}

struct Common {
    me: Nil2Group,
    mee: FgAbGroup,
    p: AbHom,
}

fn parse_common(doc: &Doc) -> Result<Common> {
    let me = parse_me(doc)?;
    let f = doc.need("Mee")?;
    f.allow(&["group"])?;
    let mee = f.group("group")?;
    let f = doc.need("P")?;
    f.allow(&["images"])?;
    let p = f.hom("images", &mee, me.center())?;
    Ok(Common { me, mee, p })
}

fn parse_sigma(doc: &Doc, mee: &FgAbGroup) -> Result<Option<AbHom>> {
    doc.get("sigma")
        .map(|f| {
            f.allow(&["images"])?;
            f.hom("images", mee, mee)
        })
        .transpose()
}

fn parse_bracket(doc: &Doc, n: usize, mee: &FgAbGroup) -> Result<Option<Vec<Vec<Elem>>>> {
    doc.get("bracket")
        .map(|f| {
            f.allow(&["form"])?;
            f.form("form", mee, n)
        })
        .transpose()
}

fn parse_psg_doc(doc: &Doc) -> Result<PreSquareGroup> {
    let Common { me, mee, p } = parse_common(doc)?;
    let n = me.quotient().ngens();
    let sigma = parse_sigma(doc, &mee)?.ok_or_else(|| Error::Parse("missing section [sigma]".into()))?;
    let bracket = parse_bracket(doc, n, &mee)?.ok_or_else(|| Error::Parse("missing section [bracket]".into()))?;
    PreSquareGroup::new(me, mee, sigma, p, bracket)
}

fn parse_sg_doc(doc: &Doc) -> Result<SquareGroup> {
    let Common { me, mee, p } = parse_common(doc)?;
    let q = me.quotient().clone();
    let c = me.center().clone();
    let n = q.ngens();
    let f = doc.need("H")?;
    let mode_line = f.entry("mode")?.line;
    let h = match f.word("mode", &["table", "structured"])? {
        "table" => {
            f.allow(&["mode", "values"])?;
            let order = me.order_of_group().ok_or_else(|| at(mode_line, "table mode needs a finite Me"))?;
            let count = usize::try_from(order).map_err(|_| at(mode_line, "Me too large"))?;
            for s in ["H.h", "H.g", "H.cross"] {
                if doc.get(s).is_some() {
                    return Err(Error::Parse(format!("[{s}] is only used with mode = structured")));
                }
            }
            QuadraticMap::Table(f.elems("values", &mee, count)?)
        }
        _ => {
            f.allow(&["mode"])?;
            let fh = doc.need("H.h")?;
            fh.allow(&["images"])?;
            let h = fh.hom("images", &c, &mee)?;
            let fc = doc.need("H.cross")?;
            fc.allow(&["form"])?;
            let cross = fc.form("form", &mee, n)?;
            let fg = doc.need("H.g")?;
            fg.allow(&["rule", "values"])?;
            let rule_line = fg.entry("rule")?.line;
            let g = match fg.word("rule", &["generators", "table"])? {
                "generators" => {
                    let Cocycle::Form(form) = me.cocycle() else {
                        return Err(at(rule_line, "rule = generators needs cocycle = form in [Me]"));
                    };
                    let linear = fg.elems("values", &mee, n)?;
                    let upper = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| if j < i { mee.zero_elem() } else { mee.sub(&cross[i][j], &h.apply(&form.bilinear[i][j])) })
                                .collect()
                        })
                        .collect();
                    PointMap::quadratic(&q, &mee, linear, upper).map_err(|e| at(rule_line, e))?
                }
                _ => {
                    let order = q.order().ok_or_else(|| at(rule_line, "rule = table needs a finite quotient"))?;
                    let count = usize::try_from(order).map_err(|_| at(rule_line, "quotient too large"))?;
                    PointMap::table(&q, &mee, fg.elems("values", &mee, count)?).map_err(|e| at(rule_line, e))?
                }
            };
            QuadraticMap::Structured { h, g, cross }
        }
    };
    let sg = SquareGroup::new(me, mee.clone(), h, p)?;
    let w = sg.wp();
    if let Some(sigma) = parse_sigma(doc, &mee)? {
        if &sigma != w.sigma() {
            return Err(Error::Invalid("[sigma] disagrees with HP - Id".into()));
        }
    }
    if let Some(b) = parse_bracket(doc, n, &mee)? {
        if b.as_slice() != w.bracket() {
            return Err(Error::Invalid("[bracket] disagrees with the cross effect of H".into()));
        }
    }
    Ok(sg)
}

pub fn fmt_elem(x: &[i128]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn fmt_elems(xs: &[Elem]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| fmt_elem(x)).collect();
    format!("[{}]", parts.join(","))
}

pub fn fmt_form(rows: &[Vec<Elem>]) -> String {
    let parts: Vec<String> = rows.iter().map(|r| fmt_elems(r)).collect();
    format!("[{}]", parts.join(","))
}

/// The images of the generators.
pub fn fmt_hom(h: &AbHom) -> String {
    let imgs: Vec<Elem> = (0..h.source().ngens()).map(|i| h.image_of_gen(i)).collect();
    fmt_elems(&imgs)
}

/// Writes `[Me]`; cocycles other than forms and tables are replaced by the form of the
/// ordered-word section, which describes an isomorphic group with the same quotient,
/// centre and generator lifts.
fn write_me(out: &mut String, me: &Nil2Group) {
    let _ = writeln!(out, "[Me]");
    let _ = writeln!(out, "quotient = {}", me.quotient());
    let _ = writeln!(out, "center_part = {}", me.center());
    match me.cocycle() {
        Cocycle::Table(t) => {
            let _ = writeln!(out, "cocycle = table");
            let _ = writeln!(out, "values = {}", fmt_elems(t));
        }
        Cocycle::Form(f) => write_form(out, f),
        _ => write_form(out, &me.word_form()),
    }
    out.push('\n');
}

fn write_form(out: &mut String, f: &CocycleForm) {
    let _ = writeln!(out, "cocycle = form");
    let _ = writeln!(out, "bilinear = {}", fmt_form(&f.bilinear));
    let _ = writeln!(out, "carries = {}", fmt_elems(&f.carries));
}

fn write_tail(out: &mut String, mee: &FgAbGroup, p: &AbHom) {
    let _ = writeln!(out, "[Mee]\ngroup = {mee}\n");
    let _ = writeln!(out, "[P]\nimages = {}\n", fmt_hom(p));
}

pub fn write_psg(m: &PreSquareGroup) -> String {
    let mut out = String::from("# presquare group\n\n");
    write_me(&mut out, m.me());
    write_tail(&mut out, m.mee(), m.p());
    let _ = writeln!(out, "[sigma]\nimages = {}\n", fmt_hom(m.sigma()));
    let _ = writeln!(out, "[bracket]\nform = {}", fmt_form(m.bracket()));
    out
}

pub fn write_sg(q: &SquareGroup) -> String {
    let mut out = String::from("# square group\n\n");
    let me = q.qe();
    write_me(&mut out, me);
    write_tail(&mut out, q.qee(), q.p());
    let kept = matches!(me.cocycle(), Cocycle::Form(_) | Cocycle::Table(_));
    if let (true, QuadraticMap::Table(t)) = (kept, q.quadratic()) {
        let _ = writeln!(out, "[H]\nmode = table\nvalues = {}", fmt_elems(t));
        return out;
    }
    let (h, _) = q.split_parts();
    let pi0 = q.pi0();
    let _ = writeln!(out, "[H]\nmode = structured\n");
    let _ = writeln!(out, "[H.h]\nimages = {}\n", fmt_hom(&h));
    if let Cocycle::Table(_) = me.cocycle() {
        let values: Vec<Elem> = pi0.elements().expect("finite").iter().map(|x| q.eval(&me.lift(x))).collect();
        let _ = writeln!(out, "[H.g]\nrule = table\nvalues = {}\n", fmt_elems(&values));
    } else {
        let values: Vec<Elem> = (0..pi0.ngens()).map(|i| q.eval(&me.lift(&pi0.gen(i)))).collect();
        let _ = writeln!(out, "[H.g]\nrule = generators\nvalues = {}\n", fmt_elems(&values));
    }
    let _ = writeln!(out, "[H.cross]\nform = {}", fmt_form(&q.cross_form()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadfun::abelian::hom_group;
    use quadfun::nil2::{canonical_ta, Nil2Elem};
    use quadfun::psg::{omega, OmegaVariant};
    use quadfun::sg::{coproduct, half_invertible, product, stable_universal, two_power_cyclic, znil};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    /// `(q, c) ↦ (q, c − word(q).c)`, the coordinate change behind [`write_me`].
    fn normalize(me: &Nil2Group, x: &Nil2Elem) -> Nil2Elem {
        match me.cocycle() {
            Cocycle::Form(_) | Cocycle::Table(_) => x.clone(),
            _ => Nil2Elem::new(x.q.clone(), me.center().sub(&x.c, &me.word(&x.q).c)),
        }
    }

    fn points(me: &Nil2Group) -> Vec<Nil2Elem> {
        let (qs, _) = me.quotient().sample(48);
        let (cs, _) = me.center().sample(6);
        qs.iter().flat_map(|a| cs.iter().map(move |c| Nil2Elem::new(a.clone(), c.clone()))).collect()
    }

    fn sg_corpus() -> Vec<SquareGroup> {
        let t1 = two_power_cyclic(1).unwrap();
        let h3 = half_invertible(&g("Z/3")).unwrap();
        vec![
            znil(),
            t1.clone(),
            two_power_cyclic(3).unwrap(),
            h3.clone(),
            stable_universal(&g("Z + Z/4")).unwrap().0,
            product(&znil(), &t1).unwrap().sg,
            coproduct(&t1, &h3).unwrap().sg,
            coproduct(&znil(), &t1).unwrap().sg,
            t1.structured(),
        ]
    }

    #[test]
    fn square_groups_survive_writing() {
        let mut rng = StdRng::seed_from_u64(3);
        for q in sg_corpus() {
            let alpha = hom_group(q.pi0(), q.qee()).random(&mut rng, 3);
            let q = q.twist(&alpha).unwrap();
            let text = write_sg(&q);
            let back = parse_sg(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back.validate(), Ok(()));
            for x in points(q.qe()) {
                let y = normalize(q.qe(), &x);
                assert_eq!(back.eval(&y), q.eval(&x), "{text}");
            }
            assert_eq!(back.wp().sigma(), q.wp().sigma());
            assert_eq!(back.wp().bracket(), q.wp().bracket());
            let again = parse_sg(&write_sg(&back)).unwrap();
            assert_eq!(again, back);
            assert_eq!(write_sg(&again), write_sg(&back));
        }
    }

    #[test]
    fn presquare_groups_survive_writing() {
        for s in ["Z", "Z/2", "Z/4", "Z/2 + Z/2", "Z + Z/3"] {
            for v in [OmegaVariant::Plain, OmegaVariant::Bar] {
                let m = omega(&canonical_ta(&g(s)), v).unwrap();
                let text = write_psg(&m);
                let back = parse_psg(&text).unwrap();
                assert_eq!(back.validate(), Ok(()));
                assert_eq!(back.invariants().triple(), m.invariants().triple(), "{s}");
                assert_eq!(parse_psg(&write_psg(&back)).unwrap(), back);
            }
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "[Me]\nquotient = Z/2\ncenter_part = 0\ncocycle = form\nbilinear = [[[]]]\ncarries = [[1]]\n";
        match parse_psg(text) {
            Err(Error::Parse(m)) => assert!(m.starts_with("line 6"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_psg("[Mee]\ngroup = Z\n[Bogus]\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_psg("key = 1\n"), Err(Error::Parse(_))));
    }
}
