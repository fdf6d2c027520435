//! Minimal SVG text builder. Coordinates are written with two decimals so
//! output is byte-stable.

use std::fmt::Write;

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Fixed two-decimal coordinate.
pub(crate) fn px(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub(crate) struct Svg {
    buf: String,
}

impl Svg {
    pub fn new(width: u32, height: u32, title: &str) -> Self {
        let mut buf = String::new();
        let _ = write!(
            buf,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" \
             viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">\n\
             <title>{}</title>\n\
             <rect class=\"background\" x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>\n\
             <text class=\"title\" x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
            escape(title),
            px(f64::from(width) / 2.0),
            escape(title)
        );
        Self { buf }
    }

    pub fn raw(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    #[allow(clippy::too_many_arguments)]
    pub fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str, tooltip: Option<&str>) {
        let _ = write!(
            self.buf,
            "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"",
            px(x),
            px(y),
            px(w.max(0.0)),
            px(h.max(0.0))
        );
        self.close_with("rect", tooltip);
    }

    #[allow(clippy::too_many_arguments)]
    pub fn line(&mut self, class: &str, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64, tooltip: Option<&str>) {
        let _ = write!(
            self.buf,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"",
            px(x1),
            px(y1),
            px(x2),
            px(y2),
            px(width)
        );
        self.close_with("line", tooltip);
    }

    pub fn polyline(&mut self, class: &str, points: &[(f64, f64)], stroke: &str, width: f64, extra: &str, tooltip: Option<&str>) {
        let pts: Vec<String> = points.iter().map(|&(x, y)| format!("{},{}", px(x), px(y))).collect();
        let _ = write!(
            self.buf,
            "<polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\"{extra}",
            pts.join(" "),
            px(width)
        );
        self.close_with("polyline", tooltip);
    }

    pub fn circle(&mut self, class: &str, x: f64, y: f64, r: f64, fill: &str, tooltip: Option<&str>) {
        let _ = write!(
            self.buf,
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"",
            px(x),
            px(y),
            px(r)
        );
        self.close_with("circle", tooltip);
    }

    /// `anchor` is `start`, `middle` or `end`.
    pub fn text(&mut self, class: &str, x: f64, y: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{}</text>",
            px(x),
            px(y),
            escape(content)
        );
    }

    /// Text slanted 60° upward about its anchor point.
    pub fn vtext(&mut self, class: &str, x: f64, y: f64, content: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{0}\" y=\"{1}\" text-anchor=\"start\" transform=\"rotate(-60 {0} {1})\">{2}</text>",
            px(x),
            px(y),
            escape(content)
        );
    }

    fn close_with(&mut self, tag: &str, tooltip: Option<&str>) {
        match tooltip {
            Some(t) => {
                let _ = writeln!(self.buf, "><title>{}</title></{tag}>", escape(t));
            }
            None => self.buf.push_str("/>\n"),
        }
    }

    pub fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}
