"""Minimal SVG writer producing deterministic, self-contained documents."""
from typing import Dict, List, Optional
from xml.sax.saxutils import escape, quoteattr


def fmt(value: float) -> str:
    """Coordinates are written with two decimals so output is byte-stable."""
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


class SvgDocument:
    """Accumulates SVG elements and renders them as one document."""

    def __init__(self, width: int, height: int, title: str = "") -> None:
        self.width = width
        self.height = height
        self.title = title
        self.elements: List[str] = []

    @staticmethod
    def _attrs(attrs: Dict[str, str]) -> str:
        return "".join(f" {key}={quoteattr(value)}" for key, value in attrs.items())

    def _add(self, tag: str, attrs: Dict[str, str], text: Optional[str] = None, title: Optional[str] = None) -> None:
        children = ""
        if title is not None:
            children += f"<title>{escape(title)}</title>"
        if text is not None:
            children += escape(text)
        if children:
            self.elements.append(f"<{tag}{self._attrs(attrs)}>{children}</{tag}>")
        else:
            self.elements.append(f"<{tag}{self._attrs(attrs)}/>")

    def line(self, x1: float, y1: float, x2: float, y2: float, css_class: str, **extra: str) -> None:
        attrs = {"class": css_class, "x1": fmt(x1), "y1": fmt(y1), "x2": fmt(x2), "y2": fmt(y2)}
        attrs.update(extra)
        self._add("line", attrs)

    def circle(self, cx: float, cy: float, r: float, css_class: str, title: Optional[str] = None) -> None:
        self._add("circle", {"class": css_class, "cx": fmt(cx), "cy": fmt(cy), "r": fmt(r)}, title=title)

    def rect(self, x: float, y: float, width: float, height: float, css_class: str) -> None:
        self._add("rect", {
            "class": css_class, "x": fmt(x), "y": fmt(y), "width": fmt(width), "height": fmt(height),
        })

    def text(self, x: float, y: float, string: str, css_class: str, anchor: str = "middle", **extra: str) -> None:
        attrs = {"class": css_class, "x": fmt(x), "y": fmt(y), "text-anchor": anchor}
        attrs.update(extra)
        self._add("text", attrs, text=string)

    def group_start(self, css_class: str) -> None:
        self.elements.append(f"<g{self._attrs({'class': css_class})}>")

    def group_end(self) -> None:
        self.elements.append("</g>")

    def render(self, style: str = "") -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        body = f"<title>{escape(self.title)}</title>\n"
        if style:
            body += f"<style>{style}</style>\n"
        body += "".join(f"{element}\n" for element in self.elements)
        return f"{head}{body}</svg>\n"
