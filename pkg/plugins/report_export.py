"""
Modul obsahující funkce pro export souhrnného reportu do různých formátů.

Textový a HTML výstup se renderuje z Jinja2 šablon v plugins/templates,
PDF se skládá přes ReportLab, JSON a CSV jsou strojově čitelné.
"""

import csv
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from plugins.documents import (bounds_to_dict, entry_to_dict, flat_plan_to_dict,
                               hybrid_plan_to_dict, write_json)
from src.hybridplan.engine.errors import DocumentIOError
from src.hybridplan.engine.planner import FlatRatePlan, HybridPlan, PlanBounds, ValidationReport

logger = logging.getLogger("hybridplan.report")

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")
REPORT_TITLE = "Hybridní tarif: souhrn návrhu, simulace a vyúčtování"


def _format_g(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:g}"


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(TEMPLATE_DIR),
        autoescape=select_autoescape(["html"]),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["g"] = _format_g
    return env


def render_template(name: str, context: Dict[str, Any]) -> str:
    """Vyrenderuje šablonu z adresáře templates."""
    return _environment().get_template(name).render(**context)


def bounds_context(plan: Optional[HybridPlan], lower: FlatRatePlan, higher: FlatRatePlan,
                   bounds: PlanBounds, validation: Optional[ValidationReport] = None) -> Dict[str, Any]:
    return {
        "plan": hybrid_plan_to_dict(plan) if plan is not None else None,
        "lower": flat_plan_to_dict(lower),
        "higher": flat_plan_to_dict(higher),
        "bounds": bounds_to_dict(bounds),
        "validation": [entry_to_dict(e) for e in validation.entries] if validation else [],
    }


def render_bounds_table(plan: Optional[HybridPlan], lower: FlatRatePlan, higher: FlatRatePlan,
                        bounds: PlanBounds, validation: Optional[ValidationReport] = None) -> str:
    """Čitelná tabulka mezí n_min/n_max, alpha_min/alpha_max a u_max."""
    return render_template("bounds.txt.j2", bounds_context(plan, lower, higher, bounds, validation))


def build_summary(plan: HybridPlan, lower: FlatRatePlan, higher: FlatRatePlan, bounds: PlanBounds,
                  validation: ValidationReport, bill_runs: Sequence[Dict[str, Any]],
                  comparison: Sequence[Dict[str, Any]] = (),
                  warnings: Sequence[str] = ()) -> Dict[str, Any]:
    """
    Sestaví data souhrnného reportu.

    Args:
        bill_runs: Běhy z účetního dokumentu (viz documents.bills_run_to_dict)
        comparison: Řádky srovnání hybridního a klasického režimu
        warnings: Varování zachycená během běhu
    """
    summary = {
        "title": REPORT_TITLE,
        "generated_at": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
    }
    summary.update(bounds_context(plan, lower, higher, bounds, validation))
    summary["runs"] = list(bill_runs)
    summary["comparison"] = list(comparison)
    summary["warnings"] = list(warnings)
    summary["passed"] = validation.passed and all(run["passed"] for run in bill_runs)
    return summary


def _write_text(file_path: str, text: str) -> str:
    try:
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise DocumentIOError(f"Report {file_path} nelze zapsat: {e}") from e
    return file_path


def export_to_txt(summary: Dict[str, Any], file_path: str) -> str:
    return _write_text(file_path, render_template("summary.txt.j2", summary))


def export_to_html(summary: Dict[str, Any], file_path: str) -> str:
    return _write_text(file_path, render_template("summary.html.j2", summary))


def export_to_json(summary: Dict[str, Any], file_path: str) -> str:
    return write_json(file_path, summary)


def export_to_csv(summary: Dict[str, Any], file_path: str) -> str:
    """
    Exportuje účty všech běhů do CSV souboru.
    """
    try:
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file_path, "w", newline="", encoding="utf-8") as csvfile:
            fieldnames = ["scenario", "mode", "id", "usage_mbit", "base_gbp",
                          "usage_charge_gbp", "total_gbp"]
            writer = csv.DictWriter(csvfile, fieldnames=fieldnames)
            writer.writeheader()
            for run in summary["runs"]:
                for bill in run["bills"]:
                    writer.writerow({"scenario": run["scenario"], "mode": run["mode"], **bill})
    except OSError as e:
        raise DocumentIOError(f"CSV {file_path} nelze zapsat: {e}") from e
    return file_path


def _pdf_table(rows: List[List[str]]) -> Table:
    table = Table(rows, hAlign="LEFT")
    table.setStyle(TableStyle([
        ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#f2f2f2")),
        ("GRID", (0, 0), (-1, -1), 0.5, colors.HexColor("#dddddd")),
        ("FONTSIZE", (0, 0), (-1, -1), 8),
        ("VALIGN", (0, 0), (-1, -1), "TOP"),
    ]))
    return table


def export_to_pdf(summary: Dict[str, Any], file_path: str) -> str:
    """
    Exportuje souhrn do PDF.

    Vzorce se vypisují identifikátorem požadavku, protože základní fonty
    ReportLabu neobsahují všechny matematické znaky.
    """
    styles = getSampleStyleSheet()
    story = [Paragraph(summary["title"], styles["Title"]),
             Paragraph(f"Vytvořeno: {summary['generated_at']}", styles["Normal"]),
             Spacer(1, 12)]

    bounds = summary["bounds"]
    plan = summary["plan"]
    story.append(Paragraph("Meze návrhu", styles["Heading2"]))
    story.append(_pdf_table([
        ["veličina", "hodnota"],
        ["n_min = P_H / P_L", f"{bounds['n_min']:.4f}"],
        ["n_max = TGR_H / TGR_L", f"{bounds['n_max']:.4f}"],
        ["u_max (Mbit)", f"{bounds['u_max_mbit']:.6g}"],
        ["alpha_min (GBP/Mbit)", f"{bounds['alpha_min_gbp_per_mbit']:.6g}"],
        ["alpha_max (GBP/Mbit)", f"{bounds['alpha_max_gbp_per_mbit']:.6g}"],
        ["N", str(plan["n_subscribers"])],
        ["P (GBP)", plan["base_price_gbp"]],
        ["alpha (GBP/Mbit)", f"{plan['slope_gbp_per_mbit']:.6g}"],
    ]))
    story.append(Spacer(1, 12))

    for run in summary["runs"]:
        story.append(Paragraph(f"Scénář {run['scenario']} ({run['mode']})", styles["Heading2"]))
        rows = [["odběratel", "u (Mbit)", "základ", "využití", "celkem"]]
        rows += [[b["id"], f"{b['usage_mbit']:.6g}", b["base_gbp"], b["usage_charge_gbp"], b["total_gbp"]]
                 for b in run["bills"]]
        story.append(_pdf_table(rows))
        story.append(Paragraph(f"Příjem skupiny: {run['revenue_gbp']} GBP", styles["Normal"]))
        requirement_rows = [["požadavek", "levá strana", "pravá strana", "výsledek"]]
        requirement_rows += [[e["requirement"], e["lhs"].replace("£", "GBP "),
                              e["rhs"].replace("£", "GBP "), "OK" if e["passed"] else "CHYBA"]
                             for e in run["requirements"]]
        story.append(_pdf_table(requirement_rows))
        story.append(Spacer(1, 12))

    if summary["comparison"]:
        story.append(Paragraph("Hybridní vs. klasický režim", styles["Heading2"]))
        rows = [["scénář", "odběratel", "hybrid (Mbit)", "klasický (Mbit)", "navíc (Mbit)"]]
        rows += [[r["scenario"], r["id"], f"{r['hybrid_mbit']:.6g}", f"{r['legacy_mbit']:.6g}",
                  f"{r['surplus_mbit']:.6g}"] for r in summary["comparison"]]
        story.append(_pdf_table(rows))

    try:
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        SimpleDocTemplate(file_path, pagesize=A4, title=summary["title"]).build(story)
    except OSError as e:
        raise DocumentIOError(f"PDF {file_path} nelze zapsat: {e}") from e
    return file_path


class ReportExporter:
    """
    Třída pro export reportu do různých formátů.
    """

    EXPORTERS = {
        ".txt": export_to_txt,
        ".log": export_to_txt,
        ".html": export_to_html,
        ".htm": export_to_html,
        ".json": export_to_json,
        ".csv": export_to_csv,
        ".pdf": export_to_pdf,
    }

    @classmethod
    def export(cls, summary: Dict[str, Any], file_path: str) -> str:
        """
        Exportuje report do souboru podle přípony.

        Raises:
            DocumentIOError: neznámý formát nebo chyba zápisu
        """
        # Zjistíme příponu souboru
        _, ext = os.path.splitext(file_path)
        exporter = cls.EXPORTERS.get(ext.lower())
        if exporter is None:
            raise DocumentIOError(f"Neznámý formát reportu: {ext or file_path}")
        path = exporter(summary, file_path)
        logger.info(f"Report uložen do {path}")
        return path
