"""
Functions to render a markdown report as PDF
"""

from io import BytesIO

from markdown import markdown

REPORT_CSS = """
@page { margin: 2cm; }
body { font-family: DejaVu Sans, Arial, sans-serif; line-height: 1.5; font-size: 11pt; }
h1, h2, h3 { color: #222244; margin-top: 1em; margin-bottom: 0.4em; }
code { background-color: #f4f4f4; padding: 1px 3px; font-family: monospace; }
table { border-collapse: collapse; width: 100%; margin-bottom: 1em; }
th, td { border: 1px solid #ddd; padding: 6px; text-align: right; }
th { background-color: #f2f2f2; }
img { max-width: 100%; }
"""


def report_html(content: str, base_title: str = "Experiment report") -> str:
    body = markdown(content, extensions=["extra"])
    return (
        f"<html><head><title>{base_title}</title><style>{REPORT_CSS}</style></head>"
        f"<body>{body}</body></html>"
    )


def create_pdf_file(content: str, base_url: str = ".") -> BytesIO:
    """
    Convert markdown to styled HTML, then HTML to PDF. Relative image links
    (the SVG figures) resolve against `base_url`.
    """
    # needs the native Pango stack
    from weasyprint import HTML

    pdf_buffer = BytesIO()
    HTML(string=report_html(content), base_url=base_url).write_pdf(pdf_buffer)
    pdf_buffer.seek(0)
    return pdf_buffer
