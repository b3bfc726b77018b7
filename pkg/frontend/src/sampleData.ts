/**
 * Bundled sample workspace: a small consulting business with two regular
 * customers (one punctual, one chronically late), six months of paid
 * history, a project ledger, and two open invoices due early in the
 * forecast horizon. Amounts are integer minor currency units.
 */

import type { DateWindow, Ledger } from "./types";

export const SAMPLE_BUSINESS_ID = "sample-business";

export const SAMPLE_HISTORY_WINDOW: DateWindow = {
  start_date: "2023-01-01",
  end_date: "2023-06-30",
};

export const SAMPLE_HORIZON: DateWindow = {
  start_date: "2023-07-01",
  end_date: "2023-09-30",
};

// invoice_id,customer_id,amount,issue_date,due_date,payment_date
export const SAMPLE_INVOICES_CSV = `invoice_id,customer_id,amount,issue_date,due_date,payment_date
prompt-00,prompt-co,70000,2023-01-02,2023-01-16,2023-01-16
prompt-01,prompt-co,70000,2023-02-01,2023-02-15,2023-02-16
prompt-02,prompt-co,70000,2023-03-01,2023-03-15,2023-03-14
prompt-03,prompt-co,70000,2023-04-03,2023-04-17,2023-04-18
prompt-04,prompt-co,70000,2023-05-01,2023-05-15,2023-05-15
prompt-05,prompt-co,70000,2023-06-01,2023-06-15,2023-06-16
slowpay-00,slowpay-ltd,90000,2023-01-09,2023-01-23,2023-02-06
slowpay-01,slowpay-ltd,90000,2023-02-06,2023-02-20,2023-03-08
slowpay-02,slowpay-ltd,90000,2023-03-06,2023-03-20,2023-04-07
slowpay-03,slowpay-ltd,90000,2023-04-10,2023-04-24,2023-05-14
slowpay-04,slowpay-ltd,90000,2023-05-08,2023-05-22,2023-06-12
slowpay-05,slowpay-ltd,90000,2023-06-05,2023-06-19,
`;

export const SAMPLE_OPEN_INVOICES_CSV = `invoice_id,customer_id,amount,issue_date,due_date,payment_date
prompt-06,prompt-co,70000,2023-06-26,2023-07-10,
slowpay-06,slowpay-ltd,90000,2023-06-26,2023-07-10,
`;

export const SAMPLE_LEDGER: Ledger = {
  hourly_projects: [
    {
      id: "consulting",
      tasks: Array.from({ length: 24 }, (_, i) => ({
        task_id: `session-${i}`,
        hours: 5.0,
        wage: 5500,
        session_date: isoWeekday(i),
      })),
    },
  ],
  flat_projects: [
    { id: "website-redesign", fee: 450000, completion_date: "2023-08-15" },
  ],
  recurring_items: [
    {
      id: "office-rent",
      amount: -90000,
      period: "monthly",
      anchor_date: "2023-01-01",
      end_date: null,
    },
  ],
  planned_items: [],
};

/** Two sessions a week across the history window, Mondays and Wednesdays. */
function isoWeekday(i: number): string {
  const monday = new Date("2023-01-02T00:00:00Z");
  monday.setUTCDate(monday.getUTCDate() + Math.floor(i / 2) * 7 + (i % 2) * 2);
  return monday.toISOString().slice(0, 10);
}
