use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use matchstick_core::contribution::{enumerate_face_sets, euler_contribution_sum, total_contribution, FaceSetQuery};
use matchstick_core::format::{write_graph, GraphFile};
use matchstick_core::geometry::Rational;
use matchstick_core::patch::periodic_patch;
use matchstick_core::pentagon::polygon_check;
use matchstick_core::planar::PlanarEmbedding;
use matchstick_core::refute::refute_candidate;
use matchstick_core::sweep::{discharge_sweep, SweepConfig};
use matchstick_core::tq::{decompose, vertex_type, TQClassRecord};
use matchstick_core::tr::{enumerate_tr_classes, random_growth, TRClass};
use matchstick_core::validator::{check_degree_cap, check_regular, Verdict};
use matchstick_core::weights::{
    class_contribution_bound, union_contribution_bound, ArcKind, WeightError, WeightLedger,
};

use crate::svg;
use crate::Command;

pub struct Outcome {
    command: &'static str,
    input: Option<String>,
    eps: f64,
    result: Value,
    text: String,
    pub code: u8,
}

impl Outcome {
    pub fn json(&self) -> String {
        let mut head = serde_json::Map::new();
        head.insert("command".into(), json!(self.command));
        if let Some(i) = &self.input {
            head.insert("input".into(), json!(i));
        }
        head.insert("eps".into(), json!(format!("{:e}", self.eps)));
        head.insert("result".into(), self.result.clone());
        serde_json::to_string_pretty(&Value::Object(head)).expect("JSON values serialize")
    }

    pub fn text(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(s, "input: {i}");
        }
        let _ = writeln!(s, "eps: {:e}", self.eps);
        s.push_str(&self.text);
        s
    }
}

struct Ctx {
    command: &'static str,
    input: Option<String>,
    eps: f64,
}

impl Ctx {
    fn done(self, result: impl Serialize, text: String, code: u8) -> Result<Outcome> {
        Ok(Outcome {
            command: self.command,
            input: self.input,
            eps: self.eps,
            result: serde_json::to_value(result)?,
            text,
            code,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path, allow_abstract: bool) -> Result<GraphFile> {
    let file = GraphFile::parse(&read(path)?).with_context(|| format!("cannot parse {}", path.display()))?;
    match (file.is_abstract(), allow_abstract) {
        (true, false) => bail!("{} is a rotation-system file; this command needs coordinates", path.display()),
        _ => Ok(file),
    }
}

fn load_embedding(path: &Path, abstract_flag: bool, eps: f64) -> Result<PlanarEmbedding> {
    let file = load(path, abstract_flag)?;
    if abstract_flag && !file.is_abstract() {
        bail!("--abstract given but {} has coordinates", path.display());
    }
    if !abstract_flag && file.is_abstract() {
        bail!("{} is a rotation-system file; pass --abstract", path.display());
    }
    file.embed(eps).with_context(|| format!("cannot embed {}", path.display()))
}

/// `k` π/3 in lowest terms.
fn sixths_of_turn(k: u8) -> String {
    match k {
        0 => "0".into(),
        3 => "π".into(),
        6 => "2π".into(),
        1 => "π/3".into(),
        _ => format!("{k}π/3"),
    }
}

fn q(r: &Rational) -> String {
    r.to_string()
}

pub fn run(cmd: &Command, eps: f64) -> Result<Outcome> {
    let ctx = |command, input: Option<&Path>| Ctx { command, input: input.map(|p| p.display().to_string()), eps };
    match cmd {
        Command::Validate { file, max_degree, regular } => {
            validate(ctx("validate", Some(file)), file, *max_degree, *regular)
        }
        Command::Faces { file, abstract_ } => faces(ctx("faces", Some(file)), file, *abstract_),
        Command::Contribution { file, abstract_ } => contribution(ctx("contribution", Some(file)), file, *abstract_),
        Command::Facesets { strict, no_angle_filter } => facesets(ctx("facesets", None), *strict, *no_angle_filter),
        Command::Tq { file } => tq(ctx("tq", Some(file)), file),
        Command::Tr { file } => tr(ctx("tr", Some(file)), file),
        Command::Weights { file } => weights(ctx("weights", Some(file)), file),
        Command::Refute { file } => refute(ctx("refute", Some(file)), file),
        Command::Enumerate { max_faces, list } => enumerate(ctx("enumerate", None), *max_faces, *list),
        Command::Random { seed, faces, runs } => random(ctx("random", None), *seed, *faces, *runs),
        Command::Pentagon { steps } => pentagon(ctx("pentagon", None), *steps),
        Command::Sweep { max_faces, max_vertices } => sweep(ctx("sweep", None), *max_faces, *max_vertices),
        Command::Patch { rows, cols, shift, output } => {
            patch(ctx("patch", None), *rows, *cols, shift, output.as_deref())
        }
        Command::Render { file, output } => render(ctx("render", Some(file)), file, output),
    }
}

fn verdict_text(v: &Verdict, s: &mut String) {
    let _ = writeln!(s, "valid: {}", v.valid);
    for x in &v.violations {
        let _ = writeln!(s, "violation {}: {} (witnesses {:?})", x.condition.tag(), x.detail, x.witnesses);
    }
}

fn validate(ctx: Ctx, path: &Path, max_degree: Option<usize>, regular: Option<usize>) -> Result<Outcome> {
    let file = load(path, false)?;
    let graph = file.graph().expect("drawing");
    let mut verdict = graph.validate(ctx.eps);
    if max_degree.is_some() || regular.is_some() {
        let emb = graph.embed(ctx.eps).with_context(|| "degree checks need a connected plane embedding")?;
        if let Some(cap) = max_degree {
            verdict = verdict.merge(check_degree_cap(&emb, cap));
        }
        if let Some(r) = regular {
            verdict = verdict.merge(check_regular(&emb, r));
        }
    }
    let mut s = format!("vertices: {}\nedges: {}\n", graph.points.len(), graph.edges.len());
    verdict_text(&verdict, &mut s);
    let code = if verdict.valid { 0 } else { 2 };
    ctx.done(&verdict, s, code)
}

#[derive(Serialize)]
struct FacesResult {
    vertices: usize,
    edges: usize,
    faces: usize,
    outer_gon: usize,
    histogram: BTreeMap<usize, usize>,
}

fn faces(ctx: Ctx, path: &Path, abstract_: bool) -> Result<Outcome> {
    let emb = load_embedding(path, abstract_, ctx.eps)?;
    let r = FacesResult {
        vertices: emb.vertex_count(),
        edges: emb.edge_count(),
        faces: emb.faces().len(),
        outer_gon: emb.face(emb.outer_face()).gon,
        histogram: emb.face_histogram(),
    };
    let mut s =
        format!("vertices: {}\nedges: {}\nfaces: {}\nouter face: {}-gon\n", r.vertices, r.edges, r.faces, r.outer_gon);
    for (gon, n) in &r.histogram {
        let _ = writeln!(s, "F{gon} = {n}");
    }
    ctx.done(&r, s, 0)
}

fn contribution(ctx: Ctx, path: &Path, abstract_: bool) -> Result<Outcome> {
    let emb = load_embedding(path, abstract_, ctx.eps)?;
    let report = total_contribution(&emb)?;
    let euler = euler_contribution_sum(&emb);
    let regular5 = emb.is_regular(5);
    let mut s = String::new();
    for v in &report.per_vertex {
        let _ = writeln!(s, "vertex {}: f = {:?}, c = {}", v.vertex, v.face_set, q(&v.c));
    }
    let _ = writeln!(s, "c(V) = {}", q(&report.total));
    let _ = writeln!(s, "euler sum = {}", q(&euler));
    let _ = writeln!(s, "5-regular: {regular5}");
    let result = json!({
        "per_vertex": report.per_vertex,
        "total": q(&report.total),
        "euler_sum": q(&euler),
        "five_regular": regular5,
    });
    ctx.done(result, s, 0)
}

fn facesets(ctx: Ctx, strict: bool, no_angle_filter: bool) -> Result<Outcome> {
    let sets = enumerate_face_sets(FaceSetQuery { strict, angle_filter: !no_angle_filter, ..Default::default() });
    let mut s = String::new();
    let mut rows = Vec::new();
    for (fs, c) in &sets {
        let _ = writeln!(s, "{fs:?} c = {}", q(c));
        rows.push(json!({ "face_set": fs, "c": q(c) }));
    }
    let _ = writeln!(s, "count: {}", sets.len());
    ctx.done(json!({ "face_sets": rows }), s, 0)
}

#[derive(Serialize)]
struct ClassView<'a> {
    index: usize,
    #[serde(flatten)]
    record: &'a TQClassRecord,
    residual: String,
    vertex_types: Vec<matchstick_core::tq::VertexTypeInfo>,
}

fn tq(ctx: Ctx, path: &Path) -> Result<Outcome> {
    let emb = load_embedding(path, false, ctx.eps)?;
    let classes = decompose(&emb)?;
    let mut s = format!("classes: {}\n", classes.len());
    let mut views = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let types = c.outer_vertices.iter().map(|&v| vertex_type(&emb, c, v)).collect::<Result<Vec<_>, _>>()?;
        let residual = c.params.residual();
        let _ = writeln!(
            s,
            "class {i}: faces {:?}; {} inner / {} outer vertices; {}; residual {}; special {:?}; prospective {}",
            c.faces,
            c.inner_vertices.len(),
            c.outer_vertices.len(),
            c.params,
            q(&residual),
            c.special_vertices,
            c.prospective
        );
        views.push(ClassView { index: i, record: c, residual: q(&residual), vertex_types: types });
    }
    ctx.done(json!({ "classes": views }), s, 0)
}

fn tr(ctx: Ctx, path: &Path) -> Result<Outcome> {
    let cls = TRClass::parse(&read(path)?).with_context(|| format!("cannot parse {}", path.display()))?;
    let summary = cls.summary();
    let inner: Vec<String> = cls.inner_vertices().iter().map(|p| p.to_string()).collect();
    let special: Vec<String> = cls.special_vertices().iter().map(|p| p.to_string()).collect();
    let mut s = format!("faces: {}\n", summary.faces.join(", "));
    let _ = writeln!(s, "params: {}", summary.params);
    let _ = writeln!(s, "residual: {}", q(&summary.residual));
    let _ = writeln!(s, "inner vertices: {}", inner.join(" "));
    let _ = writeln!(s, "special vertices: {}", special.join(" "));
    let _ = writeln!(s, "dual connected: {}", cls.dual_connected());
    let code = if summary.residual == Rational::from_integer(0) { 0 } else { 2 };
    let result = json!({
        "summary": summary,
        "inner_vertices": inner,
        "special_vertices": special,
        "dual_connected": cls.dual_connected(),
    });
    ctx.done(result, s, code)
}

fn kind_label(k: &ArcKind) -> String {
    match k {
        ArcKind::Inner => "inner".into(),
        ArcKind::DoubleLeaving => "double-leaving".into(),
        ArcKind::Hole { gon } => format!("hole-{gon}"),
        ArcKind::Path { case, position } => format!("case-{case}@{position}"),
    }
}

fn ledger_text(l: &WeightLedger, s: &mut String) {
    for (i, c) in l.cycles.cycles.iter().enumerate() {
        let cases: Vec<String> = c.paths.iter().map(|p| format!("{}({}-gon)", p.case, p.gon)).collect();
        let _ = writeln!(
            s,
            "  cycle {i}: vertices {:?}, {} leaving half-edges, paths [{}]",
            c.vertices,
            c.leaving_half_edges,
            cases.join(", ")
        );
    }
    for a in &l.arcs {
        let _ = writeln!(
            s,
            "  arc [{} in face {}] {}-gon {}: ω = {}, c = {}",
            a.vertex,
            a.face,
            a.gon,
            kind_label(&a.kind),
            q(&a.omega),
            q(&a.c)
        );
    }
    for st in &l.steps {
        let _ = writeln!(
            s,
            "  step {} {}: Ω = {}, K = {}, T = {}, B1 = {}, residual {}",
            st.step,
            st.label,
            q(&st.omega),
            q(&st.k),
            q(&st.t),
            st.b1,
            q(&st.residual)
        );
    }
}

fn weights(ctx: Ctx, path: &Path) -> Result<Outcome> {
    let emb = load_embedding(path, false, ctx.eps)?;
    let classes = decompose(&emb)?;
    let mut s = format!("classes: {}\n", classes.len());
    let mut rows = Vec::new();
    let mut ledgers = Vec::new();
    let mut failed = false;
    for (i, c) in classes.iter().enumerate() {
        match class_contribution_bound(&emb, c) {
            Ok((bound, ledger)) => {
                let _ = writeln!(s, "class {i}: c(B) = {}, Σω = {}", q(&bound.c_class), q(&bound.omega));
                ledger_text(&ledger, &mut s);
                rows.push(json!({ "index": i, "status": "audited", "bound": bound, "ledger": ledger }));
                ledgers.push((c, ledger));
            }
            Err(e @ (WeightError::NotEvaluable { .. } | WeightError::NotProspective)) => {
                let _ = writeln!(s, "class {i}: skipped, {e}");
                rows.push(json!({ "index": i, "status": "skipped", "reason": e.to_string() }));
            }
            Err(e) => {
                failed = true;
                let _ = writeln!(s, "class {i}: FAILED, {e}");
                rows.push(json!({ "index": i, "status": "failed", "reason": e.to_string() }));
            }
        }
    }
    let pairs: Vec<(&TQClassRecord, &WeightLedger)> = ledgers.iter().map(|(c, l)| (*c, l)).collect();
    let union = match union_contribution_bound(&emb, &pairs) {
        Ok(u) => {
            let _ = writeln!(
                s,
                "union: c = {}, Σω = {}, shared vertices {}",
                q(&u.c_union),
                q(&u.omega_total),
                u.overlaps.len()
            );
            json!(u)
        }
        Err(e) => {
            failed = true;
            let _ = writeln!(s, "union: FAILED, {e}");
            json!({ "error": e.to_string() })
        }
    };
    ctx.done(json!({ "classes": rows, "union": union }), s, if failed { 2 } else { 0 })
}

fn refute(ctx: Ctx, path: &Path) -> Result<Outcome> {
    let file = load(path, false)?;
    let g = file.graph().expect("drawing");
    let cert = refute_candidate(&g.points, &g.edges, ctx.eps);
    let mut s = format!("verdict: {}\n", cert.verdict.tag());
    for st in &cert.chain {
        let value = st.value.map(|v| format!(" [{}]", q(&v))).unwrap_or_default();
        let _ = writeln!(s, "{} {}{}: {}", if st.passed { "ok  " } else { "FAIL" }, st.check, value, st.detail);
    }
    for v in &cert.violations {
        let _ = writeln!(s, "violation {}: {}", v.condition.tag(), v.detail);
    }
    if cert.unreachable {
        s.push_str("warning: every stage passed, which no real input can do; an earlier check missed a defect\n");
    }
    let code = match cert.verdict {
        matchstick_core::refute::CertificateVerdict::InputInvalid => 2,
        _ => 0,
    };
    ctx.done(&cert, s, code)
}

fn enumerate(ctx: Ctx, max_faces: usize, list: bool) -> Result<Outcome> {
    if max_faces == 0 || max_faces > 6 {
        bail!("--max-faces must be between 1 and 6");
    }
    let classes = enumerate_tr_classes(max_faces);
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for c in &classes {
        *by_size.entry(c.len()).or_default() += 1;
        if c.residual() != Rational::from_integer(0) {
            bad.push(c.to_text());
        }
    }
    let mut s = format!("classes: {}\n", classes.len());
    for (k, n) in &by_size {
        let _ = writeln!(s, "{k} faces: {n}");
    }
    let _ = writeln!(s, "nonzero residuals: {}", bad.len());
    let mut listed = Vec::new();
    if list {
        for c in &classes {
            let sum = c.summary();
            let _ = writeln!(s, "[{}] {} residual {}", sum.faces.join(", "), sum.params, q(&sum.residual));
            listed.push(sum);
        }
    }
    let result = json!({
        "classes": classes.len(),
        "by_size": by_size,
        "nonzero_residuals": bad,
        "list": listed,
    });
    ctx.done(result, s, if bad.is_empty() { 0 } else { 2 })
}

fn random(ctx: Ctx, seed: u64, faces: usize, runs: u64) -> Result<Outcome> {
    if faces > 50 {
        bail!("--faces must be at most 50");
    }
    if runs == 1 {
        let run = random_growth(seed, faces)?;
        let mut s = format!("seed: {seed}\nrecords: {}\ndead end: {}\n", run.records.len(), run.dead_end);
        for (i, r) in run.records.iter().enumerate() {
            let d = &r.delta;
            let _ = writeln!(
                s,
                "{i}: add {} Δσ={} Δk={} Δτ={} Δb={} residual {} cases {:?}",
                r.added_face,
                q(&d.d_sigma),
                d.d_k,
                d.d_tau,
                d.d_b,
                q(&d.residual()),
                r.case_tags
            );
        }
        let ok = run.records.iter().all(|r| r.delta.residual() == Rational::from_integer(0));
        return ctx.done(&run, s, if ok { 0 } else { 2 });
    }
    let mut signatures: BTreeMap<String, (usize, Vec<u8>)> = BTreeMap::new();
    let (mut records, mut dead_ends, mut nonzero) = (0, 0, 0);
    for sd in seed..seed + runs {
        let run = random_growth(sd, faces)?;
        dead_ends += usize::from(run.dead_end);
        for r in &run.records {
            records += 1;
            if r.delta.residual() != Rational::from_integer(0) {
                nonzero += 1;
            }
            let (a, b, c, d) = r.delta.signature();
            let e = signatures.entry(format!("({a},{b},{c},{d})")).or_insert((0, r.case_tags.clone()));
            e.0 += 1;
        }
    }
    let unmatched: Vec<&String> = signatures.iter().filter(|(_, v)| v.1.is_empty()).map(|(k, _)| k).collect();
    let mut s = format!("runs: {runs}\nrecords: {records}\ndead ends: {dead_ends}\nnonzero residuals: {nonzero}\n");
    for (sig, (n, cases)) in &signatures {
        let _ = writeln!(s, "{sig}: {n} times, cases {cases:?}");
    }
    let _ = writeln!(s, "unmatched signatures: {}", unmatched.len());
    let rows: BTreeMap<&String, Value> =
        signatures.iter().map(|(k, (n, c))| (k, json!({ "count": n, "cases": c }))).collect();
    let result = json!({
        "runs": runs,
        "records": records,
        "dead_ends": dead_ends,
        "nonzero_residuals": nonzero,
        "signatures": rows,
        "unmatched": unmatched,
    });
    let code = if nonzero == 0 && unmatched.is_empty() { 0 } else { 2 };
    ctx.done(result, s, code)
}

fn pentagon(ctx: Ctx, steps: usize) -> Result<Outcome> {
    if !(3..=8).contains(&steps) {
        bail!("--steps must be between 3 and 8");
    }
    let r = polygon_check(steps);
    let mut s = format!(
        "steps: {steps}\nwalks examined: {}\nsimple closed walks: {}\ndistinct polygons: {}\npolygons with all angles <= 2π/3: {}\n",
        r.walks_examined,
        r.simple_closed,
        r.distinct_polygons,
        r.counterexamples.len()
    );
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "largest angle: {} at vertices {:?}", sixths_of_turn(w.max_angle()), w.vertices);
    }
    ctx.done(&r, s, 0)
}

fn sweep(ctx: Ctx, max_faces: usize, max_vertices: Option<usize>) -> Result<Outcome> {
    if max_faces == 0 || max_faces > 4 {
        bail!("--max-faces must be between 1 and 4");
    }
    let r = discharge_sweep(SweepConfig { max_faces, max_vertices: max_vertices.unwrap_or(usize::MAX) });
    let mut s = format!(
        "seed classes: {}\nremoval patterns: {}\ngraphs: {}\nledgers: {}\nshared vertices: {}\n",
        r.seed_classes, r.patterns, r.graphs, r.ledgers, r.overlaps
    );
    if let Some(n) = r.smallest_graph {
        let _ = writeln!(s, "smallest graph: {n} vertices");
    }
    if let Some(m) = &r.max_omega {
        let _ = writeln!(s, "largest Σω: {}", q(m));
    }
    for (k, n) in &r.arc_kinds {
        let _ = writeln!(s, "arcs {k}: {n}");
    }
    let _ = writeln!(s, "failures: {}", r.failures.len());
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
    let code = if r.failures.is_empty() { 0 } else { 2 };
    ctx.done(&r, s, code)
}

fn patch(ctx: Ctx, rows: usize, cols: usize, shift: &[i32], output: Option<&Path>) -> Result<Outcome> {
    let p = periodic_patch(rows, cols, shift)?;
    let text = write_graph(&p.graph);
    let mut s = format!(
        "rows: {rows}\ncols: {cols}\nvertices: {}\nedges: {}\ninterior vertices: {}\n",
        p.graph.points.len(),
        p.graph.edges.len(),
        p.interior.len()
    );
    match output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            let _ = writeln!(s, "written: {}", path.display());
        }
        None => s.push_str(&text),
    }
    let result = json!({
        "rows": rows,
        "cols": cols,
        "vertices": p.graph.points.len(),
        "edges": p.graph.edges.len(),
        "interior": p.interior,
        "output": output.map(|p| p.display().to_string()),
    });
    ctx.done(result, s, 0)
}

fn render(ctx: Ctx, path: &Path, output: &Path) -> Result<Outcome> {
    let file = load(path, false)?;
    let g = file.graph().expect("drawing");
    let doc = svg::render(g, ctx.eps);
    fs::write(output, &doc.svg).with_context(|| format!("cannot write {}", output.display()))?;
    let s = format!("classes: {}\nwritten: {}\n", doc.classes, output.display());
    ctx.done(json!({ "classes": doc.classes, "output": output.display().to_string() }), s, 0)
}
