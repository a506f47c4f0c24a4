//! Command-line parsing and the subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use flatwall_core::cross::{find_cross_or_reduce, CrossOutcome};
use flatwall_core::flatwall::{flat_wall_or_minor, refine_apex, FlatWallOutcome, RefineOutcome};
use flatwall_core::graph::{Graph, VertexId};
use flatwall_core::minor::{mesh_prune_or_kt, PruneOutcome};
use flatwall_core::wall::{grid_contraction, Wall};
use flatwall_core::{Config, Profile};

use crate::doc::{
    BlockerPayload, CertificateDocument, CrossPayload, FlatPayload, Kind, KtPayload, Payload,
};
use crate::dot::{emit_dot, Artifact};
use crate::gen::{generate, Family, Spec};
use crate::io::{graph_json, load_instance, wall_json, WallSource};

pub const EXIT_FLAT: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MINOR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "flatwall", version, about = "Clique minors or flat walls")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the flat-wall pipeline on a graph and wall.
    Run {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        emit: Emit,
        /// Stop after the pruning step and emit its blocker.
        #[arg(long)]
        prune_only: bool,
    },
    /// Look for a cross over a cycle, or reduce the graph onto it.
    Cross {
        #[command(flatten)]
        inst: Instance,
        /// The cycle as a comma-separated vertex list.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<VertexId>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Refine the apex set of a flat wall.
    Refine {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        params: Params,
        /// A flat-wall document; without it the pipeline runs first.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Check a certificate document against its instance.
    Validate {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum, default_value = "pure")]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(short = 't', default_value_t = 3)]
        t: usize,
        #[arg(short = 'r', default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        apices: usize,
        /// Graph JSON destination; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        wall_out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Instance {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "generate_wall")]
    pub wall: Option<PathBuf>,
    /// Use the elementary wall of this size.
    #[arg(long)]
    pub generate_wall: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(short = 't')]
    pub t: usize,
    #[arg(short = 'r', default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value = "relaxed")]
    pub profile: String,
    /// `key=value` constants overriding the profile.
    #[arg(long)]
    pub constants: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Emit {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Re-check the emitted certificate before exiting.
    #[arg(long)]
    pub validate: bool,
}

impl Instance {
    fn load(&self) -> Result<(Graph, Option<Wall>)> {
        let src = match (&self.wall, self.generate_wall) {
            (Some(p), _) => WallSource::File(p),
            (None, Some(r)) => WallSource::Generated(r),
            (None, None) => WallSource::None,
        };
        load_instance(self.graph.as_deref(), src)
    }

    fn load_with_wall(&self) -> Result<(Graph, Wall)> {
        match self.load()? {
            (g, Some(w)) => Ok((g, w)),
            _ => bail!("this command needs --wall or --generate-wall"),
        }
    }
}

impl Params {
    pub fn config(&self) -> Result<Config> {
        let profile: Profile = self.profile.parse()?;
        let mut cfg = Config::new(self.t, self.r, profile)?;
        if let Some(p) = &self.constants {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            cfg.apply_overrides(&Config::parse_constants(&text)?)?;
        }
        Ok(cfg)
    }
}

/// What a subcommand produced.
struct Emitted {
    doc: CertificateDocument,
    code: i32,
    dot: Option<String>,
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn finish(
    e: Emitted,
    emit: &Emit,
    g: &Graph,
    w: Option<&Wall>,
    out: &mut dyn Write,
) -> Result<i32> {
    if emit.validate {
        e.doc
            .validate(g, w)
            .context("emitted certificate failed validation")?;
    }
    let text = e.doc.to_json();
    match &emit.out {
        Some(p) => write_to(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(p) = &emit.dot {
        let dot = e.dot.unwrap_or_else(|| emit_dot(&Artifact::Graph(g)));
        write_to(p, &dot)?;
    }
    Ok(e.code)
}

fn kt_doc(g: &Graph, w: &Wall, cfg: &Config, p: KtPayload) -> Emitted {
    let dot = emit_dot(&Artifact::Model(g, &p.model));
    Emitted {
        doc: CertificateDocument::new(Kind::KtModel, g, Some(w), Some(cfg), &p),
        code: EXIT_MINOR,
        dot: Some(dot),
    }
}

fn flat_doc(g: &Graph, w: &Wall, cfg: &Config, p: FlatPayload) -> Emitted {
    let dot = emit_dot(&Artifact::Drawing(&p.cert.drawing));
    Emitted {
        doc: CertificateDocument::new(Kind::FlatWall, g, Some(w), Some(cfg), &p),
        code: EXIT_FLAT,
        dot: Some(dot),
    }
}

fn pipeline(
    g: &Graph,
    w: &Wall,
    cfg: &Config,
) -> Result<std::result::Result<FlatPayload, KtPayload>> {
    Ok(match flat_wall_or_minor(g, w, cfg)? {
        FlatWallOutcome::Flat(cert) => Ok(FlatPayload {
            cert,
            universal: None,
            trace: Vec::new(),
        }),
        FlatWallOutcome::Minor { model, grasp } => Err(KtPayload {
            t: cfg.t,
            model,
            mesh: Some(w.mesh.clone()),
            grasp: Some(grasp),
        }),
    })
}

fn refine(g: &Graph, w: &Wall, cfg: &Config, first: &FlatPayload) -> Result<Emitted> {
    Ok(match refine_apex(g, w, &first.cert, cfg)? {
        RefineOutcome::Flat {
            cert,
            universal,
            trace,
        } => flat_doc(
            g,
            w,
            cfg,
            FlatPayload {
                cert,
                universal: Some(universal),
                trace,
            },
        ),
        RefineOutcome::Minor { model, grasp, .. } => kt_doc(
            g,
            w,
            cfg,
            KtPayload {
                t: cfg.t,
                model,
                mesh: Some(w.mesh.clone()),
                grasp: Some(grasp),
            },
        ),
    })
}

/// Runs a parsed command, writing documents without `--out` to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Run {
            inst,
            params,
            emit,
            prune_only,
        } => {
            let cfg = params.config()?;
            let (g, w) = inst.load_with_wall()?;
            let e = if *prune_only {
                let gc = grid_contraction(&w.mesh);
                match mesh_prune_or_kt(&g, &w.mesh, &gc, cfg.t, &cfg)? {
                    PruneOutcome::Minor(m) => kt_doc(
                        &g,
                        &w,
                        &cfg,
                        KtPayload {
                            t: cfg.t,
                            model: m.model,
                            mesh: Some(w.mesh.clone()),
                            grasp: Some(m.grasp),
                        },
                    ),
                    PruneOutcome::Blocker(cert) => Emitted {
                        doc: CertificateDocument::new(
                            Kind::Blocker,
                            &g,
                            Some(&w),
                            Some(&cfg),
                            &BlockerPayload {
                                mesh: w.mesh.clone(),
                                cert,
                            },
                        ),
                        code: EXIT_FLAT,
                        dot: None,
                    },
                }
            } else {
                match pipeline(&g, &w, &cfg)? {
                    Ok(f) => flat_doc(&g, &w, &cfg, f),
                    Err(k) => kt_doc(&g, &w, &cfg, k),
                }
            };
            finish(e, emit, &g, Some(&w), out)
        }
        Command::Cross { inst, cycle, emit } => {
            let (g, w) = inst.load()?;
            let (payload, code, dot) = match find_cross_or_reduce(&g, cycle)? {
                CrossOutcome::Cross(cross) => (
                    CrossPayload::Cross {
                        cycle: cycle.clone(),
                        cross,
                    },
                    EXIT_MINOR,
                    None,
                ),
                CrossOutcome::Drawing {
                    sequence, drawing, ..
                } => {
                    let dot = emit_dot(&Artifact::Drawing(&drawing));
                    (
                        CrossPayload::Reduction {
                            cycle: cycle.clone(),
                            sequence,
                            drawing,
                        },
                        EXIT_FLAT,
                        Some(dot),
                    )
                }
            };
            let doc = CertificateDocument::new(Kind::Cross, &g, w.as_ref(), None, &payload);
            finish(Emitted { doc, code, dot }, emit, &g, w.as_ref(), out)
        }
        Command::Refine {
            inst,
            params,
            cert,
            emit,
        } => {
            let cfg = params.config()?;
            let (g, w) = inst.load_with_wall()?;
            let first = match cert {
                Some(p) => {
                    let doc = read_doc(p)?;
                    doc.validate(&g, Some(&w))?;
                    match doc.payload()? {
                        Payload::Flat(f) => *f,
                        _ => bail!("{} is not a flat-wall document", p.display()),
                    }
                }
                None => match pipeline(&g, &w, &cfg)? {
                    Ok(f) => f,
                    Err(k) => return finish(kt_doc(&g, &w, &cfg, k), emit, &g, Some(&w), out),
                },
            };
            let e = refine(&g, &w, &cfg, &first)?;
            finish(e, emit, &g, Some(&w), out)
        }
        Command::Validate { inst, cert } => {
            let (g, w) = inst.load()?;
            let doc = read_doc(cert)?;
            doc.validate(&g, w.as_ref())?;
            writeln!(out, "ok: {} certificate", kind_name(doc.kind))?;
            Ok(EXIT_FLAT)
        }
        Command::Gen {
            family,
            size,
            t,
            r,
            seed,
            apices,
            out: gout,
            wall_out,
        } => {
            let (g, w) = generate(&Spec {
                family: *family,
                size: *size,
                t: *t,
                r: *r,
                seed: *seed,
                apices: *apices,
            })?;
            let text = graph_json(&g) + "\n";
            match gout {
                Some(p) => write_to(p, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            if let Some(p) = wall_out {
                write_to(p, &(wall_json(&w) + "\n"))?;
            }
            Ok(EXIT_FLAT)
        }
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::KtModel => "kt-model",
        Kind::FlatWall => "flat-wall",
        Kind::Cross => "cross",
        Kind::Blocker => "blocker",
    }
}

pub fn read_doc(p: &Path) -> Result<CertificateDocument> {
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
}
