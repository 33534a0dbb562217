export { parseCsv } from "./csv";
export { BenchRecord, parseRecords } from "./records";
export { PANELS, PanelName, renderPanel, speedupPanel, efficiencyPanel,
         temperaturePanel } from "./panels";
export { renderChart, escapeXml, niceTicks, fmtTick } from "./svg";
