/** Checked-in plot style: fixed palette and geometry for reproducible files. */

export const STYLE = {
  width: 720,
  height: 480,
  margin: { top: 40, right: 24, bottom: 48, left: 64 },
  font: "11px sans-serif",
  titleFont: "14px sans-serif",
  background: "#ffffff",
  axis: "#333333",
  gridline: "#dddddd",
  bandOpacity: 0.15,
  palette: [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
    "#bcbd22",
    "#e377c2",
  ],
} as const;
