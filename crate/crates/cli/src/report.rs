use liechannel::channel::{
    certify, cross_ratio_constancy, is_dupin_cyclide, lift_rank_residual, multi_circular_residual,
    net_multi_circular_residual, verify_channel, ChannelCertificate, ChannelCheck,
};
use liechannel::curvature::{
    curvature_report, diagonal_concircular, is_isothermic_5point, ribbon_cmc_analysis, summarize,
    vessiot_classify,
};
use liechannel::{Label, LegendreNet, Result, Tolerances, Vec3};
use serde_json::{json, Map, Value};

use crate::Direction;

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |v| json!(v))
}

fn euclidean_points(net: &LegendreNet) -> Option<Vec<Vec3>> {
    net.points().into_iter().collect()
}

fn circular_lines(net: &LegendreNet, dir: Label, points: Option<&[Vec3]>) -> Option<f64> {
    let points = points?;
    let mut worst: f64 = 0.0;
    for line in net.complex().lines(dir) {
        let pts: Vec<Vec3> = line.vertices.iter().map(|v| points[*v]).collect();
        if pts.len() >= 4 {
            worst = worst.max(lift_rank_residual(&pts, 3));
        }
    }
    Some(worst)
}

fn direction_report(
    net: &LegendreNet,
    dir: Label,
    points: Option<&[Vec3]>,
    tol: &Tolerances,
) -> (Value, Option<ChannelCertificate>) {
    let circ = circular_lines(net, dir, points);
    let mut m = Map::new();
    m.insert(
        "circular-lines".into(),
        json!(circ.map(|r| r <= tol.concircular)),
    );
    m.insert("circular-lines-residual".into(), opt(circ));
    m.insert(
        "multi-circular-residual".into(),
        json!(multi_circular_residual(net, dir)),
    );
    if let Err(f) = verify_channel(net, dir, tol) {
        let check = match f.check {
            ChannelCheck::Constancy => "constancy",
            ChannelCheck::Signature => "signature",
        };
        m.insert("channel".into(), json!(false));
        m.insert(
            "envelopes-spheres".into(),
            json!(f.check != ChannelCheck::Constancy),
        );
        m.insert(
            "failure".into(),
            json!({
                "check": check,
                "line": f.line,
                "ribbon": f.ribbon,
                "residual": f.residual,
                "detail": f.detail,
            }),
        );
        return (Value::Object(m), None);
    }
    m.insert("envelopes-spheres".into(), json!(true));
    let cert = match certify(net, dir, tol) {
        Ok(c) => c,
        Err(e) => {
            m.insert("channel".into(), json!(false));
            m.insert(
                "failure".into(),
                json!({ "check": "certificate", "detail": e.to_string() }),
            );
            return (Value::Object(m), None);
        }
    };
    m.insert("channel".into(), json!(true));
    m.insert("failure".into(), Value::Null);
    m.insert(
        "envelope-residual".into(),
        json!(cert.envelope_residual(net)),
    );
    m.insert(
        "lie-cyclide-spread".into(),
        json!(cert.lie_cyclide_spread()),
    );
    m.insert(
        "circle-agreement".into(),
        json!(cert.circle_agreement.iter().copied().fold(0.0, f64::max)),
    );
    m.insert(
        "cross-ratio-spread".into(),
        opt(cross_ratio_constancy(&cert, net, tol)
            .ok()
            .map(|r| r.max_spread)),
    );
    m.insert(
        "vessiot".into(),
        vessiot_classify(&cert, tol).map_or(Value::Null, |v| json!(v.kind.name())),
    );
    (Value::Object(m), Some(cert))
}

/// Verification report and exit code: 0 channel, 1 Legendre but not channel.
pub fn verify(net: &LegendreNet, direction: Direction, tol: &Tolerances) -> (Value, u8) {
    let points = euclidean_points(net);
    let mut dirs = Map::new();
    let mut channel = Vec::new();
    for d in direction.labels() {
        let (v, cert) = direction_report(net, d, points.as_deref(), tol);
        if cert.is_some() {
            channel.push(d);
        }
        dirs.insert(d.symbol().into(), v);
    }
    let class = match channel.as_slice() {
        [] => "none".to_string(),
        [d] => d.symbol().to_string(),
        _ => "both-directions".to_string(),
    };
    let dupin = is_dupin_cyclide(net, tol);
    let (iso, diag) = match &points {
        Some(p) => (
            summarize(&is_isothermic_5point(p, net.complex(), tol)),
            summarize(&diagonal_concircular(p, net.complex(), tol)),
        ),
        None => (None, None),
    };
    let multi = net_multi_circular_residual(net).ok();
    let value = json!({
        "vertices": net.complex().n_vertices(),
        "edges": net.complex().edges().len(),
        "faces": net.complex().faces().len(),
        "legendre": true,
        "directions": dirs,
        "class": class,
        "dupin": dupin.is_dupin,
        "multi-circular": multi.map(|r| r <= tol.concircular),
        "multi-circular-residual": multi,
        "isothermic": iso,
        "diagonal-concircular": diag,
    });
    (value, if channel.is_empty() { 1 } else { 0 })
}

pub fn curvature(net: &LegendreNet, tol: &Tolerances) -> Result<Value> {
    let rep = curvature_report(net, tol)?;
    let faces: Vec<Value> = rep
        .faces
        .iter()
        .zip(&rep.identity_residuals)
        .map(|(f, r)| json!({ "K": f.k, "H": f.h, "residual": f.residual, "identity-residual": r }))
        .collect();
    let edges: Vec<Value> = net
        .complex()
        .edges()
        .iter()
        .zip(&rep.edges)
        .map(|(e, k)| json!({ "a": e.a, "b": e.b, "label": e.label.symbol(), "kappa": k.kappa, "residual": k.residual }))
        .collect();
    let ribbons = certify(net, Label::Plus, tol).ok().map(|cert| {
        ribbon_cmc_analysis(net, &cert, &rep, tol)
            .into_iter()
            .map(|r| {
                json!({
                    "ribbon": r.ribbon,
                    "kappa": r.kappa,
                    "residuals": r.residuals,
                    "equal-count": r.equal_count,
                    "torus-type": r.torus_type,
                })
            })
            .collect::<Vec<_>>()
    });
    Ok(json!({
        "faces": faces,
        "edges": edges,
        "max-identity-residual": rep.max_identity_residual(),
        "kappa-spread": {
            "+": rep.kappa_spread(net.complex(), Label::Plus),
            "-": rep.kappa_spread(net.complex(), Label::Minus),
        },
        "ribbons": ribbons,
    }))
}
