# Expose the SVG chart builders
from .result_plots import DISTRIBUTION_FILE, TRAJECTORY_FILE, make_plots
from .svg_charts import LinePanel, Series, box_plot_svg, line_chart_svg, write_svg

__all__ = [
    'DISTRIBUTION_FILE', 'TRAJECTORY_FILE', 'make_plots',
    'LinePanel', 'Series', 'box_plot_svg', 'line_chart_svg', 'write_svg',
]
