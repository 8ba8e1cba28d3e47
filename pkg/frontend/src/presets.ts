/** Figure presets: axis labels plus which summary the panel shows. */

export interface Preset {
  title: string;
  xLabel: string;
  yLabel: string;
  kind: "se" | "bound";
}

export const PRESETS: Record<string, Preset> = {
  fig3: { title: "SE vs SNR (L=8)", xLabel: "SNR (dB)", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig4: { title: "SE vs channel-estimate SNR", xLabel: "SNR_H (dB)", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig5: { title: "SE vs number of paths", xLabel: "L", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig6: { title: "SE vs selected paths", xLabel: "L_S", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig7: { title: "SE vs path power split", xLabel: "alpha1", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig8: { title: "SE vs RIS size", xLabel: "M", yLabel: "SE (bits/s/Hz)", kind: "se" },
  fig9: { title: "SPIM-FD gap vs bound", xLabel: "L", yLabel: "bits/s/Hz", kind: "bound" },
  fig10: { title: "Multi-user SE vs paths", xLabel: "L", yLabel: "per-user SE (bits/s/Hz)", kind: "se" },
  fig11: { title: "Multi-user SE vs users", xLabel: "U", yLabel: "per-user SE (bits/s/Hz)", kind: "se" },
};
