"""
Export Service.
Writes distortion profiles as a fixed-column CSV table and a static SVG chart.
"""
import io
import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib
matplotlib.use('Agg')  # Non-interactive backend
import matplotlib.pyplot as plt
import pandas as pd

from .analysis_service import DistortionProfile
from .config import settings

logger = logging.getLogger(__name__)


class ProfileExporter:
    """Renders distortion profiles to CSV and SVG with byte-stable output."""

    def __init__(self, hash_salt: str = None):
        """
        Initialize exporter.

        Args:
            hash_salt: Salt for SVG element ids (default from settings)
        """
        self.hash_salt = hash_salt or settings.SVG_HASH_SALT

    def profile_frame(self, profile: DistortionProfile) -> pd.DataFrame:
        """
        Tabulate a profile.

        Args:
            profile: Distortion profile, already sorted by ambient distance

        Returns:
            DataFrame with the columns n, theta, d_ambient, log_d_leaf, saturated
        """
        rows = [
            {
                "n": sample.n,
                "theta": sample.position,
                "d_ambient": sample.d_ambient,
                "log_d_leaf": sample.d_leaf.log_value,
                "saturated": sample.saturated,
            }
            for sample in profile.samples
        ]
        frame = pd.DataFrame(rows, columns=settings.CSV_COLUMNS)
        frame["n"] = frame["n"].astype("Int64")
        return frame

    def to_csv(self, profile: DistortionProfile, output_path: Union[str, Path] = None) -> str:
        """
        Serialize a profile as CSV.

        Args:
            profile: Distortion profile
            output_path: Optional file to write

        Returns:
            CSV text
        """
        text = self.profile_frame(profile).to_csv(index=False, lineterminator="\n")
        if output_path:
            Path(output_path).write_text(text)
            logger.info("wrote %d profile rows to %s", len(profile.samples), output_path)
        return text

    def to_svg(self, profile: DistortionProfile, output_path: Union[str, Path] = None, title: Optional[str] = None) -> bytes:
        """
        Draw ln d_leaf against d_ambient.

        Saturated samples are drawn at the saturation threshold with open
        markers; zero-length samples have no logarithm and are left out.

        Args:
            profile: Distortion profile
            output_path: Optional file to write
            title: Chart title (default: the profile provenance)

        Returns:
            SVG bytes
        """
        plain = [s for s in profile.samples if not s.saturated and not s.d_leaf.is_zero]
        saturated = [s for s in profile.samples if s.saturated]

        with plt.rc_context({"svg.hashsalt": self.hash_salt, "svg.fonttype": "path"}):
            fig, ax = plt.subplots(figsize=settings.SVG_SIZE_IN, dpi=settings.SVG_DPI)
            if plain:
                ax.plot(
                    [s.d_ambient for s in plain],
                    [s.d_leaf.log_value for s in plain],
                    marker="o",
                    color="tab:blue",
                    label="ln d_leaf",
                )
            if saturated:
                ax.plot(
                    [s.d_ambient for s in saturated],
                    [settings.SATURATION_LOG] * len(saturated),
                    linestyle="none",
                    marker="o",
                    markerfacecolor="none",
                    color="tab:red",
                    label="saturated",
                )
            if plain:
                t = [s.d_ambient for s in plain]
                ax.plot(t, t, linestyle="--", color="grey", linewidth=0.8, label="ln e^t")
            ax.set_xlabel("ambient distance t")
            ax.set_ylabel("ln leaf distance")
            ax.set_title(title or _short(profile.provenance))
            if plain or saturated:
                ax.legend(loc="upper left")
            ax.grid(True, linewidth=0.3)

            buf = io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
            plt.close(fig)

        data = buf.getvalue()
        if output_path:
            Path(output_path).write_bytes(data)
            logger.info("wrote distortion chart to %s", output_path)
        return data


def _short(text: str, width: int = 90) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


# Global exporter instance
_exporter = None


def get_exporter() -> ProfileExporter:
    """Get or create the global exporter instance."""
    global _exporter
    if _exporter is None:
        _exporter = ProfileExporter()
    return _exporter
