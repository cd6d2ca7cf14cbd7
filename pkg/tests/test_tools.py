from sibre.tools import create_markdown_file, report_html, save_markdown_file


class TestMarkdown:
    def test_newline_terminated(self):
        assert create_markdown_file("# Report").getvalue() == b"# Report\n"
        assert create_markdown_file("a\n").getvalue() == b"a\n"

    def test_save_creates_directories(self, tmp_path):
        path = save_markdown_file("| a | b |", tmp_path / "run" / "report.md")
        assert path.read_text(encoding="utf-8") == "| a | b |\n"


class TestHtml:
    def test_tables_render(self):
        html = report_html("| Arm | Return |\n|-----|--------|\n| sibre | 0.7 |\n")
        assert "<table>" in html and "<td>sibre</td>" in html
        assert "border-collapse" in html
