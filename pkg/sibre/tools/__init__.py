from .markdown import create_markdown_file, save_markdown_file
from .pdf import create_pdf_file, report_html
